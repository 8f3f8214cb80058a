#include "patchy/scalar_criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <fmt/core.h>

#include "patchy/errors.hpp"
#include "patchy/roots.hpp"

namespace patchy {

namespace {

constexpr double pi = std::numbers::pi;

void check(const ScalarInput& in)
{
    if (!(in.a > 0.0) || !(in.b > 0.0)) throw Error(ErrorCode::NonpositiveDiffusion, "a and b must be positive");
    if (!(in.R > 0.0)) throw Error(ErrorCode::NonpositiveWidth, "R must be positive");
    if (in.r < 0.0) throw Error(ErrorCode::NegativeWidth, "r must be nonnegative");
    if (in.K < 1 || (in.bc != Boundary::Periodic && in.K != 1))
        throw Error(ErrorCode::InvalidRepetition, "K must be 1, or at least 1 when periodic");
    if (!std::isfinite(in.lambda) || !std::isfinite(in.mu))
        throw Error(ErrorCode::InvalidParameter, "growth rates must be finite");
}

void check_mortality(const ScalarInput& in)
{
    check(in);
    if (in.mu < 0.0) throw Error(ErrorCode::InvalidParameter, "control mortality must be nonnegative");
}

// tan(W sqrt(lambda/a)) / sqrt(a lambda), continuous at lambda = 0
double tan_ratio(double a, double lambda, double W)
{
    if (lambda == 0.0) return W / a;
    const double th = std::sqrt(lambda / a);
    return std::tan(W * th) / std::sqrt(a * lambda);
}

// tanh(w sqrt(mu/b)) / sqrt(b mu), continuous at mu = 0
double tanh_ratio(double b, double mu, double w)
{
    if (mu == 0.0) return w / b;
    return std::tanh(w * std::sqrt(mu / b)) / std::sqrt(b * mu);
}

Verdict negative_growth(const ScalarInput& in)
{
    return make_verdict(-in.lambda, "negative growth");
}

// C(s, L) and Sn(s, L) of y'' = -s y, divided by cosh when s < 0 so they stay bounded.
void fundamental(double s, double L, double& c, double& sn)
{
    if (s > 0.0) {
        const double k = std::sqrt(s);
        c = std::cos(k * L);
        sn = std::sin(k * L) / k;
    } else if (s < 0.0) {
        const double k = std::sqrt(-s);
        c = 1.0;
        sn = std::tanh(k * L) / k;
    } else {
        c = 1.0;
        sn = L;
    }
}

double clause_one_threshold(const ScalarInput& in)
{
    return in.bc == Boundary::Neumann ? pi * pi / (4.0 * in.R * in.R) : pi * pi / (in.R * in.R);
}

} // namespace

ScalarInput scalar_input(const PatchLayout& layout)
{
    const auto& ben = std::get<ScalarZone>(layout.beneficial);
    const auto& nb = std::get<ScalarZone>(layout.control);
    return ScalarInput{ben.diffusion, ben.growth, nb.diffusion, -nb.growth, layout.R, layout.r, layout.bc, layout.K};
}

PatchLayout scalar_layout(const ScalarInput& in)
{
    PatchLayout l;
    l.beneficial = ScalarZone{in.a, in.lambda};
    l.control = ScalarZone{in.b, in.mu == 0.0 ? 0.0 : -in.mu};
    l.R = in.R;
    l.r = in.r;
    l.K = in.K;
    l.bc = in.bc;
    return validate_layout(l);
}

double critical_patch_dirichlet(double a, double lambda)
{
    if (!(a > 0.0)) throw Error(ErrorCode::NonpositiveDiffusion, "a must be positive");
    if (!(lambda > 0.0))
        throw Error(ErrorCode::NonpositiveGrowth, fmt::format("growth {} is not positive, no critical size", lambda));
    return pi * std::sqrt(a / lambda);
}

double balance_lhs(double b, double mu, double w)
{
    if (mu == 0.0) return 0.0;
    return std::sqrt(mu * b) * std::tanh(w * std::sqrt(mu / b));
}

double balance_rhs(double a, double lambda, double W)
{
    if (lambda == 0.0) return 0.0;
    if (lambda < 0.0) return -std::sqrt(-lambda * a) * std::tanh(W * std::sqrt(-lambda / a));
    return std::sqrt(lambda * a) * std::tan(W * std::sqrt(lambda / a));
}

Verdict dirichlet_verdict(const ScalarInput& in, double tol)
{
    check_mortality(in);
    if (in.lambda < 0.0) return negative_growth(in);
    const double x = in.lambda / in.a;
    const double t1 = pi * pi / (in.R * in.R);
    const double t3 = 0.25 * t1;
    if (x >= t1 || std::abs(x - t1) <= tol) return make_verdict(t1 - x, "dirichlet (i): beneficial zone too wide", tol);
    if (x < t3 || std::abs(x - t3) <= tol)
        return make_verdict(t3 - x, "dirichlet (iii): narrow beneficial zone", tol);
    const double margin = -tanh_ratio(in.b, in.mu, in.r) - tan_ratio(in.a, in.lambda, in.R);
    return make_verdict(margin, "dirichlet (ii): tan-tanh balance", tol);
}

Verdict neumann_verdict(const ScalarInput& in, double tol)
{
    check_mortality(in);
    if (in.lambda < 0.0) return negative_growth(in);
    const double x = in.lambda / in.a;
    const double t = clause_one_threshold(in);
    if (x >= t || std::abs(x - t) <= tol) return make_verdict(t - x, "neumann (i): beneficial zone too wide", tol);
    const double margin = balance_lhs(in.b, in.mu, in.r) - balance_rhs(in.a, in.lambda, in.R);
    return make_verdict(margin, "neumann: tan-tanh balance", tol);
}

Verdict periodic_verdict(const ScalarInput& in, double tol)
{
    check_mortality(in);
    if (in.lambda < 0.0) return negative_growth(in);
    const double x = in.lambda / in.a;
    const double t = clause_one_threshold(in);
    if (x >= t || std::abs(x - t) <= tol) return make_verdict(t - x, "periodic (i): beneficial zone too wide", tol);
    const double margin = balance_lhs(in.b, in.mu, 0.5 * in.r) - balance_rhs(in.a, in.lambda, 0.5 * in.R);
    return make_verdict(margin, "periodic: tan-tanh balance", tol);
}

Verdict scalar_verdict(const ScalarInput& in, double tol)
{
    switch (in.bc) {
    case Boundary::Dirichlet: return dirichlet_verdict(in, tol);
    case Boundary::Neumann: return neumann_verdict(in, tol);
    case Boundary::Periodic: return periodic_verdict(in, tol);
    }
    throw Error(ErrorCode::InvalidParameter, "unknown boundary condition");
}

double characteristic(const ScalarInput& in, double E)
{
    const bool periodic = in.bc == Boundary::Periodic;
    const double W = periodic ? 0.5 * in.R : in.R;
    const double w = periodic ? 0.5 * in.r : in.r;
    const double s = (in.lambda - E) / in.a;
    const double t = (in.mu + E) / in.b;
    double c1, s1, c2, s2;
    fundamental(s, W, c1, s1);
    fundamental(-t, w, c2, s2);
    if (in.bc == Boundary::Dirichlet) return in.a * c1 * s2 + in.b * s1 * c2;
    return in.b * t * s2 * c1 - in.a * s * s1 * c2;
}

SpectralReport top_eigenvalue_scalar(const ScalarInput& in, const GridSpec& fallback)
{
    check(in);
    SpectralReport rep;
    rep.method = Method::DispersionRoot;
    if (in.r == 0.0) {
        rep.top_eigenvalue = in.bc == Boundary::Dirichlet ? in.lambda - in.a * pi * pi / (in.R * in.R) : in.lambda;
        rep.resolution = "closed form";
        return rep;
    }

    const double Reff = in.bc == Boundary::Neumann ? 2.0 * in.R : in.R;
    const double reff = in.bc == Boundary::Neumann ? 2.0 * in.r : in.r;
    const double hi = std::max(in.lambda, -in.mu);
    double lo = std::max(in.lambda - in.a * pi * pi / (Reff * Reff), -in.mu - in.b * pi * pi / (reff * reff));
    lo -= 1e-6 * (hi - lo);

    // enough samples to resolve every oscillation of either zone across the window
    const bool periodic = in.bc == Boundary::Periodic;
    const double W = periodic ? 0.5 * in.R : in.R;
    const double w = periodic ? 0.5 * in.r : in.r;
    const double phase = W * std::sqrt(std::max(0.0, (in.lambda - lo) / in.a)) / pi +
                         w * std::sqrt(std::max(0.0, -(in.mu + lo) / in.b)) / pi;
    const int samples = static_cast<int>(std::clamp(64.0 * (phase + 2.0), 4096.0, 1048576.0));

    try {
        rep.top_eigenvalue = bracketed_root([&](double E) { return characteristic(in, E); }, lo, hi, 1e-13,
                                            ScanOptions{samples, true});
        rep.error_estimate = 1e-13 * std::max(1.0, std::abs(rep.top_eigenvalue));
        rep.resolution = fmt::format("{} scan samples", samples);
        return rep;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoRoot) throw;
    }
    return top_eigenvalue_fd(scalar_layout(in), fallback);
}

double min_mortality(double a, double lambda, double R, double b, double r, Boundary bc, int K)
{
    ScalarInput in{a, lambda, b, 0.0, R, r, bc, K};
    check(in);
    if (lambda <= 0.0) return 0.0;
    if (lambda / a >= clause_one_threshold(in))
        throw Error(ErrorCode::Uncontrollable, "beneficial zone exceeds its critical size for every mortality");
    auto margin = [&](double mu) {
        in.mu = mu;
        return scalar_verdict(in, 0.0).margin;
    };
    if (margin(0.0) >= 0.0) return 0.0;
    if (r == 0.0) throw Error(ErrorCode::Uncontrollable, "no control zone (r = 0)");
    double hi = 1.0;
    while (margin(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw Error(ErrorCode::Uncontrollable, "no mortality up to 1e12 eradicates");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double min_zone_width(double a, double lambda, double R, double b, double mu, Boundary bc, int K)
{
    ScalarInput in{a, lambda, b, mu, R, 0.0, bc, K};
    check_mortality(in);
    if (lambda <= 0.0) return 0.0;
    if (lambda / a >= clause_one_threshold(in))
        throw Error(ErrorCode::Uncontrollable, "beneficial zone exceeds its critical size for every zone width");
    // under absorbing ends a wider control zone only lengthens the domain
    if (bc == Boundary::Dirichlet) return 0.0;
    const double scale = bc == Boundary::Periodic ? 0.5 : 1.0;
    const double rhs = balance_rhs(a, lambda, scale * R);
    if (!(std::sqrt(mu * b) > rhs))
        throw Error(ErrorCode::InsufficientMortality,
                    fmt::format("sqrt(mu b) = {:.4g} cannot exceed {:.4g} at any width", std::sqrt(mu * b), rhs));
    auto margin = [&](double r) { return balance_lhs(b, mu, scale * r) - rhs; };
    double hi = 1.0;
    while (margin(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw Error(ErrorCode::InsufficientMortality, "no zone width up to 1e12 eradicates");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (margin(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace patchy

namespace patchy {

namespace {

// Smallest p with a negative oracle eigenvalue, for an eigenvalue nonincreasing in p.
double bisect_oracle(const std::function<double(double)>& top, double guess, const char* what)
{
    if (top(0.0) < 0.0) return 0.0;
    double hi = guess > 0.0 ? 2.0 * guess : 1.0;
    while (top(hi) >= 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw Error(ErrorCode::Uncontrollable, fmt::format("oracle finds no eradicating {}", what));
    }
    double lo = hi / 2.0;
    while (lo > 1e-12 && top(lo) < 0.0) lo /= 2.0;
    if (lo <= 1e-12) lo = 0.0;
    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        (top(mid) < 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double min_mortality_fd(const ScalarInput& in, double guess, const GridSpec& grid)
{
    return bisect_oracle(
        [&](double mu) {
            ScalarInput x = in;
            x.mu = mu;
            return top_eigenvalue_fd(scalar_layout(x), grid).top_eigenvalue;
        },
        guess, "mortality");
}

double min_zone_width_fd(const ScalarInput& in, double guess, const GridSpec& grid)
{
    return bisect_oracle(
        [&](double r) {
            ScalarInput x = in;
            x.r = r;
            return top_eigenvalue_fd(scalar_layout(x), grid).top_eigenvalue;
        },
        guess, "zone width");
}

} // namespace patchy
