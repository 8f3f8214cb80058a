#pragma once

#include <optional>
#include <string>

#include "patchy/model.hpp"

namespace patchy {

struct StagedInput {
    Vec A_ben;
    Vec A_nb;
    Mat M_ben;
    Mat M_nb;
    double R = 1.0;
    double r = 0.0;
    Boundary bc = Boundary::Periodic;
    int K = 1;
};

StagedInput staged_input(const PatchLayout& layout);
PatchLayout staged_layout(const StagedInput& in);

// alpha with A_nb = alpha * A_ben, if one exists (relative tolerance 1e-12).
std::optional<double> diffusion_ratio(const Vec& A_ben, const Vec& A_nb);

// A = a I in the beneficial zone, b I in the control zone, control reaction M - mu I.
Verdict uniform_control_verdict(const Mat& M, double a, double b, double mu, double R, double r, Boundary bc,
                                int K = 1, double tol = kMarginalTol);

// pi / sqrt(max real eigenvalue of A^-1 M)
double critical_patch_staged(const Vec& A, const Mat& M);
// pi / sqrt(largest eigenvalue of the symmetric part of A^-1 M)
double critical_patch_symmetrized(const Vec& A, const Mat& M);

// One-sided: Eradication or Inconclusive (reason in note). k is the number of positive
// eigenvalues of the beneficial symmetric part; pass -1 to count them.
Verdict symmetrized_sufficient_verdict(const StagedInput& in, int k = -1, double tol = kMarginalTol);

// c with w_j = sum_k c_jk v_k for the normalized eigenbases of n_ben and n_nb.
struct TransferMatrix {
    Mat c;
    double E = 0.0;
};

TransferMatrix transfer_matrix(const Mat& n_ben, const Mat& n_nb, double E = 0.0);

// Sign pattern needed by the two-stage criterion, up to flipping one basis vector.
bool transfer_signs_ok(const TransferMatrix& t);

struct ControlCheck {
    bool holds = false;
    std::string reason;
};

ControlCheck proportional_control_check(double a1, double a2, const BirthDeathParams& ben, double omega,
                                        double m1_control, double m2_control);

// sqrt(L) tan(sqrt(L) W / 2)
double two_stage_rhs(double lead, double W);
// Smallest |mu_1(0)| with alpha sqrt(x) tanh(sqrt(x) w / 2) > rhs.
double control_eigenvalue_threshold(double alpha, double w, double rhs);

// One-sided two-stage transfer-matrix criterion (n = 2, proportional diffusion).
Verdict two_stage_verdict(const StagedInput& in, double tol = kMarginalTol);

// Dispatch across the staged criteria.
Verdict staged_verdict(const StagedInput& in, double tol = kMarginalTol);

} // namespace patchy
