#pragma once

#include <vector>

#include "patchy/linalg.hpp"

namespace patchy {

// Square band matrix with kl sub- and ku super-diagonals.
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    int kl() const { return kl_; }
    int ku() const { return ku_; }

    bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
    double& at(int i, int j) { return data_[i * width() + (j - i + kl_)]; }
    double get(int i, int j) const { return in_band(i, j) ? data_[i * width() + (j - i + kl_)] : 0.0; }

    Vec multiply(const Vec& x) const;

private:
    int width() const { return kl_ + ku_ + 1; }

    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    std::vector<double> data_;
};

// LU with partial pivoting, factored once and reused.
class BandLU {
public:
    explicit BandLU(const BandMatrix& a);
    Vec solve(Vec b) const;

private:
    double& u(int i, int j) { return lu_[i * w_ + (j - i + kl_)]; }
    double u(int i, int j) const { return lu_[i * w_ + (j - i + kl_)]; }

    int n_, kl_, ku2_, w_;
    std::vector<double> lu_;
    std::vector<int> piv_;
};

// True iff every pivot of the unpivoted LU of (sigma I - a) is positive.
// For a Metzler matrix this holds exactly when sigma exceeds its spectral abscissa.
bool shifted_pivots_positive(const BandMatrix& a, double sigma);

Mat to_dense(const BandMatrix& a);

} // namespace patchy
