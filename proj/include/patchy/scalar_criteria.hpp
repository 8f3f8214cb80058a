#pragma once

#include "patchy/model.hpp"
#include "patchy/oracle.hpp"

namespace patchy {

// mu is stored positive here; the layout stores the control growth as -mu.
struct ScalarInput {
    double a = 1.0;
    double lambda = 0.0;
    double b = 1.0;
    double mu = 0.0;
    double R = 1.0;
    double r = 0.0;
    Boundary bc = Boundary::Periodic;
    int K = 1;
};

ScalarInput scalar_input(const PatchLayout& layout);
PatchLayout scalar_layout(const ScalarInput& in);

double critical_patch_dirichlet(double a, double lambda);

// Two sides of the tan-tanh balance on half-widths W, w:
// sqrt(mu b) tanh(w sqrt(mu/b))  versus  sqrt(lambda a) tan(W sqrt(lambda/a)).
double balance_lhs(double b, double mu, double w);
double balance_rhs(double a, double lambda, double W);

Verdict dirichlet_verdict(const ScalarInput& in, double tol = kMarginalTol);
Verdict neumann_verdict(const ScalarInput& in, double tol = kMarginalTol);
Verdict periodic_verdict(const ScalarInput& in, double tol = kMarginalTol);
Verdict scalar_verdict(const ScalarInput& in, double tol = kMarginalTol);

// Entire characteristic function; its largest zero is the top eigenvalue and it is
// positive above max(lambda, -mu).
double characteristic(const ScalarInput& in, double E);

SpectralReport top_eigenvalue_scalar(const ScalarInput& in, const GridSpec& fallback = {});

double min_mortality(double a, double lambda, double R, double b, double r, Boundary bc, int K = 1);
double min_zone_width(double a, double lambda, double R, double b, double mu, Boundary bc, int K = 1);

// The same inverse problems decided by the sign of the finite-difference top eigenvalue,
// bisected around a starting guess (in.mu or in.r is ignored).
double min_mortality_fd(const ScalarInput& in, double guess, const GridSpec& grid = {});
double min_zone_width_fd(const ScalarInput& in, double guess, const GridSpec& grid = {});

} // namespace patchy
