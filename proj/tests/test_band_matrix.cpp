#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "patchy/band_matrix.hpp"

using namespace patchy;

TEST_CASE("band LU solves against a dense reference")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto [n, kl, ku] : {std::tuple{10, 1, 1}, {25, 3, 2}, {40, 5, 5}}) {
        BandMatrix a(n, kl, ku);
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) d(i, j) = a.at(i, j) = u(rng);
        Vec b(n);
        Eigen::VectorXd eb(n);
        for (int i = 0; i < n; ++i) eb(i) = b[i] = u(rng);
        const Vec x = BandLU(a).solve(b);
        const Eigen::VectorXd ref = d.partialPivLu().solve(eb);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref(i)).epsilon(1e-9));

        const Vec ax = a.multiply(x);
        for (int i = 0; i < n; ++i) CHECK(ax[i] == doctest::Approx(b[i]).epsilon(1e-9).scale(1.0));
        const Mat dense = to_dense(a);
        CHECK(dense(0, 0) == d(0, 0));
    }
}

TEST_CASE("shifted pivot test brackets the spectral abscissa of a Metzler matrix")
{
    // 1-D Laplacian with Dirichlet ends: eigenvalues -4 sin^2(k pi / (2(n+1)))
    const int n = 30;
    BandMatrix a(n, 1, 1);
    for (int i = 0; i < n; ++i) {
        a.at(i, i) = -2.0;
        if (i > 0) a.at(i, i - 1) = 1.0;
        if (i + 1 < n) a.at(i, i + 1) = 1.0;
    }
    const double top = -4.0 * std::pow(std::sin(M_PI / (2.0 * (n + 1))), 2);
    CHECK(shifted_pivots_positive(a, top + 1e-9));
    CHECK_FALSE(shifted_pivots_positive(a, top - 1e-9));
}
