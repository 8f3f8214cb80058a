#include "patchy/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "patchy/errors.hpp"

namespace patchy {

namespace {

struct Cell {
    double h;
    Vec diffusion;
    Mat reaction;
};

void zone_coeffs(const Zone& z, Vec& a, Mat& m)
{
    if (const auto* s = std::get_if<ScalarZone>(&z)) {
        a = {s->diffusion};
        m = Mat{{s->growth}};
    } else {
        const auto& st = std::get<StageZone>(z);
        a = st.diffusion;
        m = st.reaction;
    }
}

int zone_cells(double width, const GridSpec& grid, int level)
{
    if (width <= 0.0) return 0;
    const long base = std::max<long>(grid.min_cells, std::lround(width * grid.cells_per_unit));
    return static_cast<int>(base << level);
}

std::vector<int> zigzag(int n)
{
    std::vector<int> order;
    order.reserve(n);
    for (int lo = 0, hi = n - 1; lo <= hi; ++lo, --hi) {
        order.push_back(lo);
        if (hi != lo) order.push_back(hi);
    }
    return order;
}

double power_iteration(const DiscreteOperator& d)
{
    const int n = d.op.size();
    const double sigma = d.gershgorin + 1.0;
    BandMatrix shifted = d.op;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - d.op.kl()); j <= std::min(n - 1, i + d.op.ku()); ++j)
            shifted.at(i, j) = (i == j ? sigma : 0.0) - d.op.get(i, j);
    BandLU lu(shifted);
    Vec x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double nu = 0.0;
    const int max_iter = 20000;
    for (int it = 0; it < max_iter; ++it) {
        Vec y = lu.solve(x);
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += x[i] * y[i];
        const double nrm = norm2(y);
        for (int i = 0; i < n; ++i) x[i] = y[i] / nrm;
        if (it > 10 && std::abs(dot - nu) <= 1e-13 * std::abs(dot)) return sigma - 1.0 / dot;
        nu = dot;
    }
    throw Error(ErrorCode::NoConvergence,
                fmt::format("shift-invert iteration did not settle in {} steps (last estimate {})", max_iter,
                            sigma - 1.0 / nu));
}

} // namespace

int DiscreteOperator::slot_of(int node) const
{
    // inverse of node_of_slot, kept implicit to avoid a second table
    if (bc != Boundary::Periodic) return node;
    const int half = node;
    const int back = nodes - 1 - node;
    return half <= back ? 2 * half : 2 * back + 1;
}

DiscreteOperator assemble(const PatchLayout& input, const GridSpec& grid, int level)
{
    const PatchLayout layout = validate_layout(input);
    Vec a_ben, a_nb;
    Mat m_ben, m_nb;
    zone_coeffs(layout.beneficial, a_ben, m_ben);
    zone_coeffs(layout.control, a_nb, m_nb);
    const int ns = static_cast<int>(a_ben.size());

    const int nb = zone_cells(layout.R, grid, level);
    const int nc = zone_cells(layout.r, grid, level);
    const int reps = layout.bc == Boundary::Periodic ? layout.K : 1;
    std::vector<Cell> cells;
    for (int k = 0; k < reps; ++k) {
        for (int i = 0; i < nb; ++i) cells.push_back({layout.R / nb, a_ben, m_ben});
        for (int i = 0; i < nc; ++i) cells.push_back({layout.r / nc, a_nb, m_nb});
    }
    const int nc_total = static_cast<int>(cells.size());

    DiscreteOperator d;
    d.stages = ns;
    d.bc = layout.bc;
    d.h_beneficial = layout.R / nb;
    d.h_control = nc ? layout.r / nc : 0.0;

    // physical node i sits between cell i-1 and cell i
    int first = 0, last = nc_total; // inclusive node range
    if (layout.bc == Boundary::Dirichlet) {
        first = 1;
        last = nc_total - 1;
    } else if (layout.bc == Boundary::Periodic) {
        last = nc_total - 1;
    }
    d.nodes = last - first + 1;
    const bool periodic = layout.bc == Boundary::Periodic;
    d.node_of_slot = periodic ? zigzag(d.nodes) : std::vector<int>();
    if (!periodic)
        for (int i = 0; i < d.nodes; ++i) d.node_of_slot.push_back(i);

    d.x.resize(d.nodes);
    d.weight.resize(d.nodes);
    const int hb_nodes = periodic ? 2 : 1;
    const int bw = (hb_nodes + 1) * ns - 1;
    d.op = BandMatrix(d.nodes * ns, bw, bw);

    double pos = 0.0;
    Vec node_x(nc_total + 1);
    for (int c = 0; c < nc_total; ++c) {
        node_x[c] = pos;
        pos += cells[c].h;
    }
    node_x[nc_total] = pos;

    for (int p = first; p <= last; ++p) {
        const int node = p - first;
        const Cell* left = p > 0 ? &cells[p - 1] : (periodic ? &cells[nc_total - 1] : nullptr);
        const Cell* right = p < nc_total ? &cells[p] : nullptr;
        const double hl = left ? left->h : 0.0, hr = right ? right->h : 0.0;
        const double w = 0.5 * (hl + hr);
        d.x[node] = node_x[p];
        d.weight[node] = w;

        const int row0 = d.slot_of(node) * ns;
        auto neighbour_slot = [&](int q) -> int {
            // q is a physical node index in [0, nc_total]
            if (periodic) q = (q + nc_total) % nc_total;
            if (q < first || q > last) return -1;
            return d.slot_of(q - first);
        };
        for (int s = 0; s < ns; ++s) {
            const int row = row0 + s;
            if (left) {
                const double g = left->diffusion[s] / hl / w;
                d.op.at(row, row) -= g;
                const int ls = neighbour_slot(p - 1);
                if (ls >= 0) d.op.at(row, ls * ns + s) += g;
            }
            if (right) {
                const double g = right->diffusion[s] / hr / w;
                d.op.at(row, row) -= g;
                const int rs = neighbour_slot(p + 1);
                if (rs >= 0) d.op.at(row, rs * ns + s) += g;
            }
            for (int t = 0; t < ns; ++t) {
                double rho = 0.0;
                if (left) rho += hl * left->reaction(s, t);
                if (right) rho += hr * right->reaction(s, t);
                d.op.at(row, row0 + t) += rho / (hl + hr);
            }
        }
    }

    const int n = d.op.size();
    d.gershgorin = -1e300;
    for (int i = 0; i < n; ++i) {
        double bound = 0.0;
        for (int j = std::max(0, i - bw); j <= std::min(n - 1, i + bw); ++j) {
            const double v = d.op.get(i, j);
            if (i == j) {
                bound += v;
            } else {
                bound += std::abs(v);
                if (v < 0.0) d.metzler = false;
            }
        }
        d.gershgorin = std::max(d.gershgorin, bound);
    }
    return d;
}

BandMatrix symmetric_form(const DiscreteOperator& d)
{
    BandMatrix s = d.op;
    const int n = d.op.size();
    auto w = [&](int idx) { return d.weight[d.node_of_slot[idx / d.stages]]; };
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - d.op.kl()); j <= std::min(n - 1, i + d.op.ku()); ++j)
            s.at(i, j) = d.op.get(i, j) * std::sqrt(w(i) / w(j));
    return s;
}

double discrete_top_eigenvalue(const DiscreteOperator& d)
{
    if (!d.metzler) return power_iteration(d);

    double hi = d.gershgorin;
    double bump = 1e-12 * std::max(1.0, std::abs(hi));
    while (!shifted_pivots_positive(d.op, hi)) {
        hi += bump;
        bump *= 2.0;
    }
    double step = 1e-3 * std::max(1.0, std::abs(hi));
    double lo = hi - step;
    while (shifted_pivots_positive(d.op, lo)) {
        hi = lo;
        step *= 2.0;
        lo = hi - step;
        if (step > 1e300) throw Error(ErrorCode::NoConvergence, "no lower bound for the spectral abscissa");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shifted_pivots_positive(d.op, mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> level_eigenvalues(const PatchLayout& layout, const GridSpec& grid)
{
    if (grid.levels < 2) throw Error(ErrorCode::InvalidParameter, "at least two refinement levels are needed");
    if (!(grid.cells_per_unit > 0.0) || grid.min_cells < 1)
        throw Error(ErrorCode::InvalidParameter, "grid resolution must be positive");
    std::vector<double> out;
    for (int level = 0; level < grid.levels; ++level)
        out.push_back(discrete_top_eigenvalue(assemble(layout, grid, level)));
    return out;
}

SpectralReport top_eigenvalue_fd(const PatchLayout& layout, const GridSpec& grid)
{
    const auto e = level_eigenvalues(layout, grid);
    const double coarse = e[e.size() - 2], fine = e.back();
    SpectralReport rep;
    rep.top_eigenvalue = (4.0 * fine - coarse) / 3.0;
    rep.method = Method::FiniteDifference;
    rep.error_estimate = std::abs(fine - coarse);
    const auto d = assemble(layout, grid, grid.levels - 1);
    rep.resolution = fmt::format("{} nodes x {} stages, h_ben={:.4g}, levels={}", d.nodes, d.stages,
                                 d.h_beneficial, grid.levels);
    return rep;
}

Verdict verdict_fd(const PatchLayout& layout, const GridSpec& grid)
{
    const auto rep = top_eigenvalue_fd(layout, grid);
    Verdict v;
    v.margin = -rep.top_eigenvalue;
    v.rule = "finite-difference top eigenvalue";
    const double band = 10.0 * rep.error_estimate;
    if (std::abs(rep.top_eigenvalue) <= std::max(band, kMarginalTol))
        v.status = Status::Marginal;
    else
        v.status = rep.top_eigenvalue < 0.0 ? Status::Eradication : Status::Survival;
    v.note = fmt::format("E={:.6g} +/- {:.2g}", rep.top_eigenvalue, rep.error_estimate);
    return v;
}

} // namespace patchy
