#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "patchy/errors.hpp"
#include "patchy/linalg.hpp"

using namespace patchy;

namespace {

Eigen::MatrixXd to_eigen(const Mat& m)
{
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

Mat random_mat(std::mt19937& rng, std::size_t n, bool metzler)
{
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = (metzler && i != j) ? std::abs(u(rng)) : u(rng);
    return m;
}

double residual(const Mat& n, const EigenPair& p)
{
    const Vec nv = n * p.vector;
    double s = 0.0;
    for (std::size_t i = 0; i < nv.size(); ++i) s += std::pow(nv[i] - p.value * p.vector[i], 2);
    return std::sqrt(s);
}

} // namespace

TEST_CASE("max_real_eigenvalue on small closed cases")
{
    CHECK(max_real_eigenvalue(Mat::diag({-1.0, -2.0})) == doctest::Approx(-1.0));
    CHECK(max_real_eigenvalue(Mat{{-1.0, 2.0}, {2.0, -1.0}}) == doctest::Approx(1.0));
    const double l1 = max_real_eigenvalue(Mat{{-0.91, 2.24}, {0.01, -0.02}});
    CHECK(std::sqrt(l1) == doctest::Approx(0.067).epsilon(0.01));
    CHECK_THROWS_AS(max_real_eigenvalue(Mat{{0.0, -1.0}, {1.0, 0.0}}), Error);
}

TEST_CASE("eigenvalues agree with an independent dense solver")
{
    std::mt19937 rng(7);
    for (std::size_t n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 25; ++trial) {
            const Mat m = random_mat(rng, n, trial % 2 == 0);
            Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m));
            double ref = -1e300;
            for (int i = 0; i < es.eigenvalues().size(); ++i)
                if (std::abs(es.eigenvalues()[i].imag()) < 1e-9) ref = std::max(ref, es.eigenvalues()[i].real());
            if (ref == -1e300) {
                CHECK_THROWS(max_real_eigenvalue(m));
                continue;
            }
            CAPTURE(n);
            CAPTURE(trial);
            CHECK(max_real_eigenvalue(m) == doctest::Approx(ref).epsilon(1e-8).scale(1.0));
            const auto ev = eigenvalues(m);
            REQUIRE(ev.size() == n);
            std::complex<double> sum = 0;
            for (auto z : ev) sum += z;
            double tr = 0;
            for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
            CHECK(sum.real() == doctest::Approx(tr).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("symmetric_eigen")
{
    const auto taiga = symmetric_eigen(Mat{{-0.91, 1.125}, {1.125, -0.02}});
    CHECK(std::sqrt(taiga.values[0]) == doctest::Approx(0.863).epsilon(0.003));

    const auto id = symmetric_eigen(Mat::identity(2));
    CHECK(id.values[0] == doctest::Approx(1.0));
    CHECK(id.values[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(symmetric_eigen(Mat{{1.0, 2.0}, {0.0, 1.0}}), Error);

    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    for (std::size_t n = 2; n <= 8; ++n) {
        Mat s(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) s(i, j) = s(j, i) = g(rng);
        const auto se = symmetric_eigen(s);
        double tr = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            tr += s(i, i);
            sum += se.values[i];
            if (i > 0) CHECK(se.values[i] <= se.values[i - 1]);
        }
        CHECK(sum == doctest::Approx(tr).epsilon(1e-10).scale(1.0));

        // V diag V^T reconstructs S and V is orthonormal
        Mat v(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) v(i, k) = se.pairs[k].vector[i];
        const Mat rec = v * Mat::diag(se.values) * transpose(v);
        CHECK(max_abs(rec - s) < 1e-9);
        CHECK(max_abs(transpose(v) * v - Mat::identity(n)) < 1e-10);
        for (const auto& p : se.pairs) {
            CHECK(residual(s, p) <= 1e-10 * (1 + max_abs(s)));
            for (double c : p.vector)
                if (std::abs(c) > 1e-14) {
                    CHECK(c > 0);
                    break;
                }
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(s));
        CHECK(se.values[0] == doctest::Approx(es.eigenvalues()(n - 1)).epsilon(1e-10));
    }
}

TEST_CASE("eigen_basis_2x2 normalization")
{
    // roots of x^2 + 3x + 1 and the closed-form component (Lambda_1 + m_1) / b_1
    const auto p = eigen_basis_2x2(Mat{{-2.0, 1.0}, {1.0, -1.0}});
    const double l1 = (-3.0 + std::sqrt(5.0)) / 2.0, l2 = (-3.0 - std::sqrt(5.0)) / 2.0;
    CHECK(p[0].value == doctest::Approx(l1));
    CHECK(p[1].value == doctest::Approx(l2));
    CHECK(p[0].vector[0] == 1.0);
    CHECK(p[0].vector[1] == doctest::Approx(l1 + 2.0));
    CHECK(p[1].vector[1] == 1.0);
    CHECK(p[1].vector[0] == doctest::Approx(1.0 / (l2 + 2.0)));

    const auto d = eigen_basis_2x2(Mat::diag({2.0, 1.0}));
    CHECK(d[0].vector == Vec{1.0, 0.0});
    CHECK(d[1].vector == Vec{0.0, 1.0});

    const Mat taiga = scale_rows_inv({1.1, 50.0}, Mat{{-1.0, 2.46}, {0.52, -1.0}});
    const auto t = eigen_basis_2x2(taiga);
    CHECK(t[0].value == doctest::Approx(max_real_eigenvalue(taiga)).epsilon(1e-12));
    for (const auto& e : t) {
        const Vec u{e.vector[0] / norm2(e.vector), e.vector[1] / norm2(e.vector)};
        CHECK(residual(taiga, {e.value, u}) <= 1e-10 * (1 + max_abs(taiga)));
    }

    CHECK_THROWS_AS(eigen_basis_2x2(Mat{{0.0, -1.0}, {1.0, 0.0}}), Error);
    CHECK_THROWS_AS(eigen_basis_2x2(Mat::identity(2)), Error);
}

TEST_CASE("matrix helpers")
{
    const Mat a{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(transpose(a) == Mat{{1.0, 3.0}, {2.0, 4.0}});
    CHECK(symmetric_part(a) == Mat{{1.0, 2.5}, {2.5, 4.0}});
    CHECK(scale_rows_inv({2.0, 4.0}, a) == Mat{{0.5, 1.0}, {0.75, 1.0}});
    CHECK(a * Vec{1.0, 1.0} == Vec{3.0, 7.0});
    CHECK(norm2({3.0, 4.0}) == 5.0);
}
