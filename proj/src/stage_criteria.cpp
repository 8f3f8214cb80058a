#include "patchy/stage_criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "patchy/errors.hpp"
#include "patchy/roots.hpp"
#include "patchy/scalar_criteria.hpp"

namespace patchy {

namespace {

constexpr double pi = std::numbers::pi;

Verdict inconclusive(std::string rule, std::string note, double margin = 0.0)
{
    return Verdict{Status::Inconclusive, margin, std::move(rule), std::move(note)};
}

Verdict one_sided(double margin, std::string rule, double tol)
{
    Verdict v{margin > tol ? Status::Eradication : Status::Inconclusive, margin, std::move(rule), {}};
    return v;
}

// Widths of the equivalent periodic cell. Neumann reflects into a cell twice as wide;
// absorbing ends only lower the spectrum, so dirichlet reuses the periodic cell.
void cell_widths(const StagedInput& in, double& W, double& w)
{
    const double f = in.bc == Boundary::Neumann ? 2.0 : 1.0;
    W = f * in.R;
    w = f * in.r;
}

Mat shifted(const Mat& m, double E)
{
    Mat out = m;
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, i) -= E;
    return out;
}

bool metzler(const Mat& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && m(i, j) < 0.0) return false;
    return true;
}

bool all_equal(const Vec& v)
{
    for (double x : v)
        if (std::abs(x - v[0]) > 1e-12 * std::abs(v[0])) return false;
    return true;
}

// mu with M_nb = M_ben - mu I, if the control reaction has that form.
std::optional<double> uniform_shift(const Mat& ben, const Mat& nb)
{
    const std::size_t n = ben.rows();
    const double scale = std::max(1.0, std::max(max_abs(ben), max_abs(nb)));
    const double mu = ben(0, 0) - nb(0, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double want = i == j ? ben(i, j) - mu : ben(i, j);
            if (std::abs(nb(i, j) - want) > 1e-12 * scale) return std::nullopt;
        }
    return mu;
}

// Certification through the proportional-control hypotheses, when the matrices have that shape.
std::optional<ControlCheck> certify(const StagedInput& in, double alpha)
{
    if (std::abs(alpha - 1.0) > 1e-12) return std::nullopt;
    const Mat& m = in.M_ben;
    const Mat& c = in.M_nb;
    const double m1 = -m(0, 0), m2 = -m(1, 1), b2 = m(0, 1), b1 = m(1, 0);
    if (!(m1 > 0 && m2 > 0 && b1 > 0 && b2 > 0)) return std::nullopt;
    const double w1 = c(0, 1) / b2, w2 = c(1, 0) / b1;
    if (std::abs(w1 - w2) > 1e-12 * std::abs(w1)) return std::nullopt;
    return proportional_control_check(in.A_ben[0], in.A_ben[1], BirthDeathParams{{m1, m2}, {b1, b2}}, w1,
                                      -c(0, 0), -c(1, 1));
}

} // namespace

StagedInput staged_input(const PatchLayout& layout)
{
    const auto& ben = std::get<StageZone>(layout.beneficial);
    const auto& nb = std::get<StageZone>(layout.control);
    return StagedInput{ben.diffusion, nb.diffusion, ben.reaction, nb.reaction, layout.R, layout.r, layout.bc, layout.K};
}

PatchLayout staged_layout(const StagedInput& in)
{
    PatchLayout l;
    l.beneficial = StageZone{in.A_ben, in.M_ben};
    l.control = StageZone{in.A_nb, in.M_nb};
    l.R = in.R;
    l.r = in.r;
    l.K = in.K;
    l.bc = in.bc;
    return validate_layout(l);
}

std::optional<double> diffusion_ratio(const Vec& A_ben, const Vec& A_nb)
{
    if (A_ben.empty() || A_ben.size() != A_nb.size()) return std::nullopt;
    const double alpha = A_nb[0] / A_ben[0];
    for (std::size_t i = 0; i < A_ben.size(); ++i)
        if (std::abs(A_nb[i] - alpha * A_ben[i]) > 1e-12 * std::abs(A_nb[i])) return std::nullopt;
    return alpha;
}

Verdict uniform_control_verdict(const Mat& M, double a, double b, double mu, double R, double r, Boundary bc, int K,
                                double tol)
{
    const auto ev = eigenvalues(M);
    const double lead = max_real_eigenvalue(M);
    if (!(lead > 0.0)) throw Error(ErrorCode::AssumptionViolated, "Lambda1 must be positive");
    if (!(mu > lead)) throw Error(ErrorCode::AssumptionViolated, "mu must exceed Lambda1");
    bool skipped = false;
    for (const auto& e : ev) {
        if (!skipped && std::abs(e.imag()) <= 1e-10 * (1.0 + max_abs(M)) && e.real() == lead) {
            skipped = true;
            continue;
        }
        if (e.real() >= 0.0)
            throw Error(ErrorCode::AssumptionViolated, "another eigenvalue has nonnegative real part");
    }
    Verdict v = scalar_verdict(ScalarInput{a, lead, b, mu - lead, R, r, bc, K}, tol);
    v.rule = "uniform control / " + v.rule;
    return v;
}

double critical_patch_staged(const Vec& A, const Mat& M)
{
    const double lead = max_real_eigenvalue(scale_rows_inv(A, M));
    if (!(lead > 0.0))
        throw Error(ErrorCode::NonpositiveLeadEigenvalue, fmt::format("lead eigenvalue {} is not positive", lead));
    return pi / std::sqrt(lead);
}

double critical_patch_symmetrized(const Vec& A, const Mat& M)
{
    const double l1 = symmetric_eigen(symmetric_part(scale_rows_inv(A, M))).values.front();
    if (!(l1 > 0.0))
        throw Error(ErrorCode::NonpositiveLeadEigenvalue,
                    fmt::format("lead symmetrized eigenvalue {} is not positive", l1));
    return pi / std::sqrt(l1);
}

Verdict symmetrized_sufficient_verdict(const StagedInput& in, int k, double tol)
{
    const std::string rule = "symmetrization bound";
    const int n = static_cast<int>(in.A_ben.size());
    const Vec eb = symmetric_eigen(symmetric_part(scale_rows_inv(in.A_ben, in.M_ben))).values;
    const Vec en = symmetric_eigen(symmetric_part(scale_rows_inv(in.A_nb, in.M_nb))).values;
    const int kb = static_cast<int>(std::count_if(eb.begin(), eb.end(), [](double x) { return x > 0.0; }));
    if (k >= 0 && k != kb)
        throw Error(ErrorCode::AssumptionViolated,
                    fmt::format("beneficial symmetric part has {} positive eigenvalues, not {}", kb, k));
    const double mu1 = en.front();
    if (!(mu1 < 0.0)) return inconclusive(rule, "control zone not dissipative");
    const auto alpha = diffusion_ratio(in.A_ben, in.A_nb);
    if (!alpha) return inconclusive(rule, "control diffusion not proportional to beneficial diffusion");
    if (kb == 0) return one_sided(-eb.front(), rule + " (no positive direction)", tol);

    double W, w;
    cell_widths(in, W, w);
    const double l1 = eb.front();
    if (W * std::sqrt(l1) >= pi) return inconclusive(rule, "R beyond the symmetrized critical size");
    const double m = std::sqrt(-mu1);
    const double lhs = std::min(*alpha, 1.0) * m * std::tanh(0.5 * w * m);
    const double rhs = 2.0 * W * n * kb * l1 / (1.0 + std::cos(W * std::sqrt(l1)));
    Verdict v = one_sided(lhs - rhs, rule, tol);
    if (v.status != Status::Eradication) v.note = fmt::format("inequality fails: {:.4g} <= {:.4g}", lhs, rhs);
    return v;
}

TransferMatrix transfer_matrix(const Mat& n_ben, const Mat& n_nb, double E)
{
    const auto v = eigen_basis_2x2(n_ben);
    const auto w = eigen_basis_2x2(n_nb);
    // columns of V are v_1, v_2
    const double v00 = v[0].vector[0], v10 = v[0].vector[1], v01 = v[1].vector[0], v11 = v[1].vector[1];
    const double det = v00 * v11 - v01 * v10;
    if (std::abs(det) <= 1e-14 * norm2(v[0].vector) * norm2(v[1].vector))
        throw Error(ErrorCode::SingularBasis, "beneficial eigenvectors are parallel");
    const Mat vinv{{v11 / det, -v01 / det}, {-v10 / det, v00 / det}};
    const Mat wm{{w[0].vector[0], w[1].vector[0]}, {w[0].vector[1], w[1].vector[1]}};
    return TransferMatrix{transpose(vinv * wm), E};
}

bool transfer_signs_ok(const TransferMatrix& t)
{
    const double off = t.c(0, 1) * t.c(1, 0);
    const double diag = t.c(0, 0) * t.c(1, 1);
    return (off <= 0.0 && diag >= 0.0) || (off >= 0.0 && diag <= 0.0);
}

ControlCheck proportional_control_check(double a1, double a2, const BirthDeathParams& ben, double omega,
                                        double m1_control, double m2_control)
{
    if (ben.deaths.size() != 2 || ben.births.size() != 2)
        throw Error(ErrorCode::DimensionMismatch, "proportional control needs two stages");
    const double m1 = ben.deaths[0], m2 = ben.deaths[1], b1 = ben.births[0], b2 = ben.births[1];
    if (!(m1 * m2 - b1 * b2 < 0.0)) return {false, "lead eigenvalue nonpositive"};
    if (!(1.0 / a1 >= 1.0 / a2) || !(m1 / a1 >= m2 / a2)) return {false, "diffusion ordering"};
    if (!(omega > 0.0 && omega < 1.0)) return {false, "omega outside (0, 1)"};
    if (!(m1_control >= m1 && m2_control >= m2)) return {false, "control mortality below beneficial mortality"};
    if (!(m1_control - m2_control >= m1 - m2)) return {false, "control mortality gap too small"};
    return {true, "proportional control hypotheses hold"};
}

double two_stage_rhs(double lead, double W)
{
    const double s = std::sqrt(lead);
    return s * std::tan(0.5 * s * W);
}

double control_eigenvalue_threshold(double alpha, double w, double rhs)
{
    if (rhs <= 0.0) return 0.0;
    if (!(w > 0.0)) throw Error(ErrorCode::Uncontrollable, "no control zone (r = 0)");
    auto f = [&](double x) { return alpha * std::sqrt(x) * std::tanh(0.5 * std::sqrt(x) * w) - rhs; };
    double hi = 1.0;
    while (f(hi) <= 0.0) hi *= 2.0;
    return bracketed_root(f, 0.0, hi);
}

Verdict two_stage_verdict(const StagedInput& in, double tol)
{
    const std::string rule = "two-stage transfer criterion";
    if (in.A_ben.size() != 2) return inconclusive(rule, "needs exactly two stages");
    const auto alpha = diffusion_ratio(in.A_ben, in.A_nb);
    if (!alpha) return inconclusive(rule, "control diffusion not proportional to beneficial diffusion");

    auto n_ben = [&](double E) { return scale_rows_inv(in.A_ben, shifted(in.M_ben, E)); };
    auto n_nb = [&](double E) { return (1.0 / *alpha) * scale_rows_inv(in.A_ben, shifted(in.M_nb, E)); };

    auto ben_basis = [&](double E) {
        try {
            return eigen_basis_2x2(n_ben(E));
        } catch (const Error& e) {
            throw Error(ErrorCode::AssumptionViolated, fmt::format("beneficial eigenvalues at E={}: {}", E, e.what()));
        }
    };
    const auto b0 = ben_basis(0.0);
    const double lead = b0[0].value;
    if (!(lead > 0.0 && b0[1].value < 0.0))
        throw Error(ErrorCode::AssumptionViolated, "need Lambda1(0) > 0 > Lambda2(0)");

    double W, w;
    cell_widths(in, W, w);
    if (W * std::sqrt(lead) >= pi) return inconclusive(rule, "R at or beyond the staged critical size");

    auto lead_at = [&](double E) { return max_real_eigenvalue(n_ben(E)); };
    double upper = lead * std::max(in.A_ben[0], in.A_ben[1]);
    while (lead_at(upper) > 0.0) upper *= 2.0;
    const double E0 = bracketed_root(lead_at, 0.0, upper);

    const auto cert = certify(in, *alpha);
    const bool certified = cert && cert->holds;
    const double ltol = 1e-12 * (1.0 + max_abs(n_ben(0.0)));
    constexpr int samples = 257;
    for (int i = 0; i < samples; ++i) {
        const double E = E0 * i / (samples - 1);
        const auto bb = ben_basis(E);
        if (!(bb[0].value >= -ltol && bb[1].value < 0.0))
            throw Error(ErrorCode::AssumptionViolated, fmt::format("Lambda1(E) >= 0 > Lambda2(E) fails at E={}", E));
        std::array<EigenPair, 2> nb;
        try {
            nb = eigen_basis_2x2(n_nb(E));
        } catch (const Error&) {
            return inconclusive(rule, fmt::format("control eigenvalues complex or repeated at E={:.4g}", E));
        }
        if (!(nb[0].value < 0.0 && nb[0].value > nb[1].value))
            return inconclusive(rule, fmt::format("control eigenvalues not negative at E={:.4g}", E));
        if (!certified && !transfer_signs_ok(transfer_matrix(n_ben(E), n_nb(E), E)))
            return inconclusive(rule, fmt::format("transfer-matrix sign condition fails at E={:.4g}", E));
    }

    const double m = std::sqrt(-eigen_basis_2x2(n_nb(0.0))[0].value);
    const double lhs = *alpha * m * std::tanh(0.5 * m * w);
    const double rhs = two_stage_rhs(lead, W);
    Verdict v = one_sided(lhs - rhs, rule + (certified ? " (certified)" : " (sampled)"), tol);
    v.note = v.status == Status::Eradication ? fmt::format("{:.4g} > {:.4g}", lhs, rhs)
                                             : fmt::format("inequality fails: {:.4g} <= {:.4g}", lhs, rhs);
    return v;
}

Verdict staged_verdict(const StagedInput& in, double tol)
{
    staged_layout(in);
    const std::size_t n = in.A_ben.size();

    if (all_equal(in.A_ben) && all_equal(in.A_nb)) {
        if (auto mu = uniform_shift(in.M_ben, in.M_nb)) {
            try {
                return uniform_control_verdict(in.M_ben, in.A_ben[0], in.A_nb[0], *mu, in.R, in.r, in.bc, in.K, tol);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::AssumptionViolated) throw;
            }
        }
    }

    const double lead = max_real_eigenvalue(scale_rows_inv(in.A_ben, in.M_ben));
    if (in.r == 0.0) {
        if (in.bc != Boundary::Dirichlet)
            return make_verdict(-max_real_eigenvalue(in.M_ben), "staged: spatially uniform mode", tol);
        if (!(lead > 0.0)) return make_verdict(-lead, "staged: no growing direction", tol);
        return make_verdict(pi / std::sqrt(lead) - in.R, "staged critical patch", tol);
    }

    if (lead > 0.0 && metzler(in.M_ben) && metzler(in.M_nb)) {
        const double rc = pi / std::sqrt(lead) * (in.bc == Boundary::Neumann ? 0.5 : 1.0);
        if (in.R > rc || std::abs(in.R - rc) <= tol)
            return make_verdict(rc - in.R, "beneficial zone exceeds staged critical size", tol);
    }

    std::string notes;
    if (n == 2) {
        try {
            Verdict v = two_stage_verdict(in, tol);
            if (v.status == Status::Eradication) return v;
            notes = v.rule + ": " + v.note;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::AssumptionViolated) throw;
            notes = std::string("two-stage: ") + e.what();
        }
    }
    Verdict v = symmetrized_sufficient_verdict(in, -1, tol);
    if (v.status == Status::Eradication) return v;
    if (!notes.empty()) notes += "; ";
    notes += v.rule + ": " + v.note;
    return inconclusive("no sufficient criterion applies", notes, v.margin);
}

} // namespace patchy
