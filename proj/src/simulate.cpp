#include "patchy/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "patchy/band_matrix.hpp"
#include "patchy/errors.hpp"

namespace patchy {

namespace {

double beneficial_growth(const PatchLayout& layout)
{
    if (const auto* s = std::get_if<ScalarZone>(&layout.beneficial)) return s->growth;
    return max_real_eigenvalue(std::get<StageZone>(layout.beneficial).reaction);
}

// I + c L in the band layout of L.
BandMatrix identity_plus(const BandMatrix& l, double c)
{
    BandMatrix m = l;
    const int n = l.size();
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - l.kl()); j <= std::min(n - 1, i + l.ku()); ++j)
            m.at(i, j) = (i == j ? 1.0 : 0.0) + c * l.get(i, j);
    return m;
}

double max_diffusion(const PatchLayout& layout)
{
    double a = 0.0;
    for (const Zone* z : {&layout.beneficial, &layout.control}) {
        if (const auto* s = std::get_if<ScalarZone>(z))
            a = std::max(a, s->diffusion);
        else
            for (double v : std::get<StageZone>(*z).diffusion) a = std::max(a, v);
    }
    return a;
}

double finest_spacing(const DiscreteOperator& d)
{
    return d.h_control > 0.0 ? std::min(d.h_beneficial, d.h_control) : d.h_beneficial;
}

} // namespace

Vec default_initial_profile(const PatchLayout& layout, const DiscreteOperator& d)
{
    const double centre = 0.5 * layout.R, width = layout.R / 8.0;
    Vec y(static_cast<std::size_t>(d.nodes) * d.stages);
    for (int i = 0; i < d.nodes; ++i) {
        const double z = (d.x[i] - centre) / width;
        for (int s = 0; s < d.stages; ++s) y[i * d.stages + s] = std::exp(-0.5 * z * z);
    }
    double nrm = 0.0;
    for (int i = 0; i < d.nodes; ++i)
        for (int s = 0; s < d.stages; ++s) nrm += d.weight[i] * y[i * d.stages + s] * y[i * d.stages + s];
    for (double& v : y) v /= std::sqrt(nrm);
    return y;
}

Trajectory simulate(const PatchLayout& input, const SimulationOptions& opt)
{
    const PatchLayout layout = validate_layout(input);
    const DiscreteOperator d = assemble(layout, opt.grid, opt.level);
    const int ns = d.stages, n = d.op.size();

    double T = opt.T, dt = opt.dt;
    if (T == 0.0 || dt == 0.0) {
        const double e = discrete_top_eigenvalue(d);
        if (T == 0.0) {
            T = 20.0 / std::max(std::abs(beneficial_growth(layout)), 0.1);
            // a decaying ground mode must stay well above the rounding floor
            const double cap = e < 0.0 ? 40.0 : 200.0;
            if (std::abs(e) * T > cap) T = cap / std::abs(e);
        }
        if (dt == 0.0) {
            dt = T / 4000.0;
            // Crank-Nicolson damps the stiffest modes by about 1 - 4/(dt a 4/h^2) per step; rounding
            // noise in them outlives a decaying ground mode unless dt < h / sqrt(a |E|).
            if (e < 0.0) dt = std::min(dt, 0.5 * finest_spacing(d) / std::sqrt(max_diffusion(layout) * -e));
        }
    }
    if (!(T > 0.0) || !(dt > 0.0) || T < 10.0 * dt)
        throw Error(ErrorCode::InvalidParameter, fmt::format("need dt > 0 and T >= 10 dt (T={}, dt={})", T, dt));
    const int steps = static_cast<int>(std::lround(T / dt));

    Vec phys = opt.initial.empty() ? default_initial_profile(layout, d) : opt.initial;
    if (phys.size() != static_cast<std::size_t>(n))
        throw Error(ErrorCode::DimensionMismatch,
                    fmt::format("initial profile has {} entries, grid has {}", phys.size(), n));
    bool any = false;
    for (double v : phys) {
        if (v < 0.0 || !std::isfinite(v)) throw Error(ErrorCode::InvalidParameter, "initial profile must be nonnegative");
        any = any || v > 0.0;
    }
    if (!any) throw Error(ErrorCode::InvalidParameter, "initial profile is identically zero");

    // storage order
    Vec y(n);
    for (int slot = 0; slot < d.nodes; ++slot)
        for (int s = 0; s < ns; ++s) y[slot * ns + s] = phys[d.node_of_slot[slot] * ns + s];
    auto weight_of = [&](int idx) { return d.weight[d.node_of_slot[idx / ns]]; };

    Trajectory tr;
    tr.stages = ns;
    tr.x = d.x;
    tr.dt = dt;
    tr.T = steps * dt;
    tr.stage_log_norm.assign(ns, {});
    tr.min_relative = std::numeric_limits<double>::infinity();

    double log_scale = 0.0;
    std::size_t next_snap = 0;
    Vec snaps = opt.snapshot_times;
    for (double& s : snaps) s = std::min(s, tr.T); // past the horizon means the final state
    std::sort(snaps.begin(), snaps.end());

    const double growth_cap = 10.0 * (std::abs(d.gershgorin) + 1.0);
    double prev_log = 0.0;

    auto record = [&](int step) {
        const double t = step * dt;
        double sq = 0.0, mass = 0.0, ymax = 0.0, ymin = std::numeric_limits<double>::infinity();
        Vec stage_sq(ns, 0.0);
        for (int i = 0; i < n; ++i) {
            const double v = y[i];
            if (!std::isfinite(v))
                throw Error(ErrorCode::Instability, fmt::format("non-finite density at t={}", t));
            const double w = weight_of(i);
            sq += w * v * v;
            stage_sq[i % ns] += w * v * v;
            mass += w * v;
            ymax = std::max(ymax, std::abs(v));
            ymin = std::min(ymin, v);
        }
        if (sq == 0.0) throw Error(ErrorCode::Instability, fmt::format("density vanished at t={}", t));
        const double log_norm = 0.5 * std::log(sq) + log_scale;
        if (step > 0 && log_norm - prev_log > growth_cap * dt)
            throw Error(ErrorCode::Instability, fmt::format("norm grew faster than the operator bound at t={}", t));
        prev_log = log_norm;
        tr.t.push_back(t);
        tr.log_norm.push_back(log_norm);
        tr.mass.push_back(mass * std::exp(log_scale));
        for (int s = 0; s < ns; ++s)
            tr.stage_log_norm[s].push_back(stage_sq[s] > 0.0 ? 0.5 * std::log(stage_sq[s]) + log_scale
                                                             : -std::numeric_limits<double>::infinity());
        tr.min_relative = std::min(tr.min_relative, ymin / ymax);
        while (next_snap < snaps.size() && snaps[next_snap] <= t + 0.5 * dt) {
            Snapshot sn{t, Vec(n)};
            for (int slot = 0; slot < d.nodes; ++slot)
                for (int s = 0; s < ns; ++s)
                    sn.density[d.node_of_slot[slot] * ns + s] = y[slot * ns + s] * std::exp(log_scale);
            tr.snapshots.push_back(std::move(sn));
            ++next_snap;
        }
        const double nrm = std::sqrt(sq);
        if (nrm > 1e100 || nrm < 1e-100) {
            for (double& v : y) v /= nrm;
            log_scale += std::log(nrm);
        }
    };

    record(0);
    const int euler = std::min(opt.euler_steps, steps);
    if (euler > 0) {
        const BandLU ie(identity_plus(d.op, -dt));
        for (int k = 1; k <= euler; ++k) {
            y = ie.solve(y);
            record(k);
        }
    }
    if (steps > euler) {
        const BandLU lhs(identity_plus(d.op, -0.5 * dt));
        const BandMatrix rhs = identity_plus(d.op, 0.5 * dt);
        for (int k = euler + 1; k <= steps; ++k) {
            y = lhs.solve(rhs.multiply(y));
            record(k);
        }
    }
    return tr;
}

AffineFit fit_second_half(const Trajectory& tr)
{
    const double half = 0.5 * tr.t.back();
    double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        if (tr.t[i] < half) continue;
        sw += 1;
        st += tr.t[i];
        sy += tr.log_norm[i];
        stt += tr.t[i] * tr.t[i];
        sty += tr.t[i] * tr.log_norm[i];
    }
    if (sw < 2) throw Error(ErrorCode::TransientNotResolved, "too few samples in the fit window");
    AffineFit f;
    const double tm = st / sw, ym = sy / sw;
    f.slope = (sty - sw * tm * ym) / (stt - sw * tm * tm);
    f.intercept = ym - f.slope * tm;
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        if (tr.t[i] >= half)
            f.max_residual = std::max(f.max_residual, std::abs(tr.log_norm[i] - (f.intercept + f.slope * tr.t[i])));
    return f;
}

double growth_exponent(const Trajectory& tr, double tol)
{
    const auto f = fit_second_half(tr);
    if (f.max_residual > tol)
        throw Error(ErrorCode::TransientNotResolved,
                    fmt::format("log-norm deviates {:.3g} from affine over the second half; increase T",
                                f.max_residual));
    return f.slope;
}

} // namespace patchy
