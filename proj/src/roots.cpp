#include "patchy/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/core.h>

#include "patchy/errors.hpp"

namespace patchy {

namespace {

double refine(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
              double tol)
{
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    auto done = [tol](double a, double b) {
        return std::abs(b - a) <= tol * std::max(1.0, std::min(std::abs(a), std::abs(b)));
    };
    std::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, iters);
    return 0.5 * (a + b);
}

} // namespace

double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                      ScanOptions scan)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi) || !(tol > 0.0))
        throw Error(ErrorCode::InvalidBracket, fmt::format("bad interval [{}, {}]", lo, hi));

    if (scan.samples <= 0) {
        double flo = f(lo), fhi = f(hi);
        if (std::signbit(flo) == std::signbit(fhi) && flo != 0.0 && fhi != 0.0)
            throw Error(ErrorCode::NoRoot, fmt::format("no sign change on [{}, {}]", lo, hi));
        return refine(f, lo, hi, flo, fhi, tol);
    }

    const int n = scan.samples;
    const double step = (hi - lo) / n;
    auto at = [&](int k) { return scan.from_high ? hi - k * step : lo + k * step; };
    double xp = at(0), fp = f(xp);
    if (fp == 0.0) return xp;
    for (int k = 1; k <= n; ++k) {
        double x = k == n ? (scan.from_high ? lo : hi) : at(k);
        double fx = f(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) != std::signbit(fp)) {
            if (scan.from_high) return refine(f, x, xp, fx, fp, tol);
            return refine(f, xp, x, fp, fx, tol);
        }
        xp = x;
        fp = fx;
    }
    throw Error(ErrorCode::NoRoot,
                fmt::format("no sign change on [{}, {}] at {} samples", lo, hi, n));
}

} // namespace patchy
