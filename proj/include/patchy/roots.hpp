#pragma once

#include <functional>

namespace patchy {

struct ScanOptions {
    int samples = 0;        // 0: [lo, hi] must already bracket a root
    bool from_high = false; // scan from hi downwards and take the first sign change
};

// Root of f in [lo, hi] to width tol * max(1, |x|).
// Throws InvalidBracket for an empty or non-finite interval, NoRoot if no sign change is found.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      double tol = 1e-12, ScanOptions scan = {});

} // namespace patchy
