#include "patchy/band_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "patchy/errors.hpp"

namespace patchy {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), data_(static_cast<std::size_t>(n) * (kl + ku + 1), 0.0)
{
}

Vec BandMatrix::multiply(const Vec& x) const
{
    Vec y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
            s += data_[i * width() + (j - i + kl_)] * x[j];
        y[i] = s;
    }
    return y;
}

BandLU::BandLU(const BandMatrix& a)
    : n_(a.size()), kl_(a.kl()), ku2_(a.kl() + a.ku()), w_(2 * a.kl() + a.ku() + 1),
      lu_(static_cast<std::size_t>(n_) * w_, 0.0), piv_(n_)
{
    for (int i = 0; i < n_; ++i)
        for (int j = std::max(0, i - a.kl()); j <= std::min(n_ - 1, i + a.ku()); ++j)
            u(i, j) = a.get(i, j);

    for (int k = 0; k < n_; ++k) {
        const int last = std::min(n_ - 1, k + kl_);
        const int jend = std::min(n_ - 1, k + ku2_);
        int p = k;
        for (int i = k + 1; i <= last; ++i)
            if (std::abs(u(i, k)) > std::abs(u(p, k))) p = i;
        piv_[k] = p;
        if (u(p, k) == 0.0) throw Error(ErrorCode::NoConvergence, "singular band matrix");
        if (p != k)
            for (int j = k; j <= jend; ++j) std::swap(u(k, j), u(p, j));
        const double d = u(k, k);
        for (int i = k + 1; i <= last; ++i) {
            const double l = u(i, k) / d;
            u(i, k) = l;
            if (l == 0.0) continue;
            for (int j = k + 1; j <= jend; ++j) u(i, j) -= l * u(k, j);
        }
    }
}

Vec BandLU::solve(Vec b) const
{
    for (int k = 0; k < n_; ++k) {
        if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
        const int last = std::min(n_ - 1, k + kl_);
        for (int i = k + 1; i <= last; ++i) b[i] -= u(i, k) * b[k];
    }
    for (int k = n_ - 1; k >= 0; --k) {
        const int jend = std::min(n_ - 1, k + ku2_);
        double s = b[k];
        for (int j = k + 1; j <= jend; ++j) s -= u(k, j) * b[j];
        b[k] = s / u(k, k);
    }
    return b;
}

bool shifted_pivots_positive(const BandMatrix& a, double sigma)
{
    const int n = a.size(), kl = a.kl(), ku = a.ku(), w = kl + ku + 1;
    std::vector<double> m(static_cast<std::size_t>(n) * w, 0.0);
    auto at = [&](int i, int j) -> double& { return m[i * w + (j - i + kl)]; };
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j)
            at(i, j) = (i == j ? sigma : 0.0) - a.get(i, j);

    for (int k = 0; k < n; ++k) {
        const double d = at(k, k);
        if (!(d > 0.0)) return false;
        const int last = std::min(n - 1, k + kl);
        const int jend = std::min(n - 1, k + ku);
        for (int i = k + 1; i <= last; ++i) {
            const double l = at(i, k) / d;
            if (l == 0.0) continue;
            for (int j = k + 1; j <= jend; ++j) at(i, j) -= l * at(k, j);
        }
    }
    return true;
}

} // namespace patchy

namespace patchy {

Mat to_dense(const BandMatrix& a)
{
    Mat m(a.size(), a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = std::max(0, i - a.kl()); j <= std::min(a.size() - 1, i + a.ku()); ++j) m(i, j) = a.get(i, j);
    return m;
}

} // namespace patchy
