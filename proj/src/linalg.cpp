#include "patchy/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/core.h>

#include "patchy/errors.hpp"

namespace patchy {

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& row : rows) {
        if (row.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Mat Mat::identity(std::size_t n)
{
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const Vec& d)
{
    Mat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Mat operator*(const Mat& x, const Mat& y)
{
    if (x.cols() != y.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product");
    Mat z(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k)
            for (std::size_t j = 0; j < y.cols(); ++j) z(i, j) += x(i, k) * y(k, j);
    return z;
}

Vec operator*(const Mat& x, const Vec& v)
{
    if (x.cols() != v.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
    Vec y(x.rows(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) y[i] += x(i, j) * v[j];
    return y;
}

Mat operator+(const Mat& x, const Mat& y)
{
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw Error(ErrorCode::DimensionMismatch, "matrix sum");
    Mat z = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) += y(i, j);
    return z;
}

Mat operator-(const Mat& x, const Mat& y) { return x + (-1.0) * y; }

Mat operator*(double s, const Mat& x)
{
    Mat z = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) *= s;
    return z;
}

Mat transpose(const Mat& x)
{
    Mat z(x.cols(), x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) z(j, i) = x(i, j);
    return z;
}

Mat symmetric_part(const Mat& x) { return 0.5 * (x + transpose(x)); }

Mat scale_rows_inv(const Vec& d, const Mat& x)
{
    if (d.size() != x.rows()) throw Error(ErrorCode::DimensionMismatch, "row scaling");
    Mat z = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) /= d[i];
    return z;
}

double max_abs(const Mat& x)
{
    double m = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) m = std::max(m, std::abs(x(i, j)));
    return m;
}

double norm2(const Vec& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

namespace {

using cplx = std::complex<double>;

std::vector<cplx> quadratic_roots(double tr, double det)
{
    const double h = 0.5 * tr;
    const double disc = h * h - det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        // avoid cancellation in the smaller root
        const double big = h + std::copysign(s, h);
        const double small = big != 0.0 ? det / big : h - s;
        return {cplx(std::max(big, small)), cplx(std::min(big, small))};
    }
    const double s = std::sqrt(-disc);
    return {cplx(h, s), cplx(h, -s)};
}

// Roots of x^3 - c2 x^2 + c1 x - c0.
std::vector<cplx> cubic_roots(double c2, double c1, double c0)
{
    auto poly = [&](double x) { return ((x - c2) * x + c1) * x - c0; };
    auto dpoly = [&](double x) { return (3.0 * x - 2.0 * c2) * x + c1; };
    auto polish = [&](double x) {
        for (int it = 0; it < 3; ++it) {
            const double d = dpoly(x);
            if (d == 0.0) break;
            const double nx = x - poly(x) / d;
            if (std::abs(poly(nx)) >= std::abs(poly(x))) break;
            x = nx;
        }
        return x;
    };

    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = -(2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0);
    // depressed cubic t^3 + p t + q = 0
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc <= 0.0 && p < 0.0) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double th = std::acos(arg) / 3.0;
        std::vector<cplx> out;
        for (int k = 0; k < 3; ++k)
            out.emplace_back(polish(m * std::cos(th - 2.0 * std::numbers::pi * k / 3.0) + shift));
        return out;
    }
    if (disc <= 0.0) { // p == 0 and q == 0: triple root
        double x = polish(shift);
        return {cplx(x), cplx(x), cplx(x)};
    }
    const double sd = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sd);
    const double v = std::cbrt(-q / 2.0 - sd);
    const double x1 = polish(u + v + shift);
    // deflate: x^2 - (c2 - x1) x + c0 / x1, written without dividing by x1
    const double b = c2 - x1;
    const double c = c1 - x1 * b;
    auto rest = quadratic_roots(b, c);
    return {cplx(x1), rest[0], rest[1]};
}

void balance(Mat& a)
{
    const int n = static_cast<int>(a.rows());
    const double radix = 2.0, sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                for (int j = 0; j < n; ++j) a(i, j) *= g;
                for (int j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

// Gaussian reduction to upper Hessenberg form with pivoting.
void hessenberg(Mat& a)
{
    const int n = static_cast<int>(a.rows());
    for (int m = 1; m < n - 1; ++m) {
        double x = 0.0;
        int i = m;
        for (int j = m; j < n; ++j)
            if (std::abs(a(j, m - 1)) > std::abs(x)) {
                x = a(j, m - 1);
                i = j;
            }
        if (i != m) {
            for (int j = m - 1; j < n; ++j) std::swap(a(i, j), a(m, j));
            for (int j = 0; j < n; ++j) std::swap(a(j, i), a(j, m));
        }
        if (x == 0.0) continue;
        for (i = m + 1; i < n; ++i) {
            double y = a(i, m - 1);
            if (y == 0.0) continue;
            y /= x;
            a(i, m - 1) = 0.0;
            for (int j = m; j < n; ++j) a(i, j) -= y * a(m, j);
            for (int j = 0; j < n; ++j) a(j, m) += y * a(j, i);
        }
    }
}

// Shifted double-step QR on an upper Hessenberg matrix.
std::vector<cplx> hessenberg_qr(Mat a, int max_iter)
{
    const int n = static_cast<int>(a.rows());
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<cplx> w(n);
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

    int nn = n - 1, l = 0;
    double t = 0.0, p = 0.0, q = 0.0, r = 0.0, s = 0.0, x = 0.0, y = 0.0, z = 0.0;
    while (nn >= 0) {
        int its = 0;
        do {
            for (l = nn; l > 0; --l) {
                s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) <= eps * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            x = a(nn, nn);
            if (l == nn) {
                w[nn--] = x + t;
            } else {
                y = a(nn - 1, nn - 1);
                double ww = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + ww;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + std::copysign(z, p);
                        w[nn - 1] = w[nn] = x + z;
                        if (z != 0.0) w[nn] = x - ww / z;
                    } else {
                        w[nn] = cplx(x + p, -z);
                        w[nn - 1] = std::conj(w[nn]);
                    }
                    nn -= 2;
                } else {
                    if (its == max_iter)
                        throw Error(ErrorCode::NoConvergence,
                                    fmt::format("QR iteration exceeded {} sweeps", max_iter));
                    if (its == 10 || its == 20) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        ww = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    for (; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        a(i + 2, i) = 0.0;
                        if (i != m) a(i + 2, i - 1) = 0.0;
                    }
                    for (int k = m; k < nn; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k + 1 != nn) r = a(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        if ((s = std::copysign(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k + 1 != nn) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k + 1 != nn) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return w;
}

void check_square(const Mat& n)
{
    if (!n.square() || n.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "expected a square matrix");
}

} // namespace

std::vector<std::complex<double>> eigenvalues(const Mat& n)
{
    check_square(n);
    const std::size_t d = n.rows();
    if (d == 1) return {cplx(n(0, 0))};
    if (d == 2) return quadratic_roots(n(0, 0) + n(1, 1), n(0, 0) * n(1, 1) - n(0, 1) * n(1, 0));
    if (d == 3) {
        const double c2 = n(0, 0) + n(1, 1) + n(2, 2);
        const double c1 = n(0, 0) * n(1, 1) - n(0, 1) * n(1, 0) + n(0, 0) * n(2, 2) - n(0, 2) * n(2, 0) +
                          n(1, 1) * n(2, 2) - n(1, 2) * n(2, 1);
        const double c0 = n(0, 0) * (n(1, 1) * n(2, 2) - n(1, 2) * n(2, 1)) -
                          n(0, 1) * (n(1, 0) * n(2, 2) - n(1, 2) * n(2, 0)) +
                          n(0, 2) * (n(1, 0) * n(2, 1) - n(1, 1) * n(2, 0));
        return cubic_roots(c2, c1, c0);
    }
    Mat a = n;
    balance(a);
    hessenberg(a);
    return hessenberg_qr(a, 500);
}

double max_real_eigenvalue(const Mat& n)
{
    const auto ev = eigenvalues(n);
    const double tol = 1e-10 * (1.0 + max_abs(n));
    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : ev)
        if (std::abs(e.imag()) <= tol) {
            found = true;
            best = std::max(best, e.real());
        }
    if (!found) throw Error(ErrorCode::NoRealEigenvalue, "matrix has no real eigenvalue");
    return best;
}

SymmetricEigen symmetric_eigen(const Mat& s)
{
    check_square(s);
    const std::size_t n = s.rows();
    const double scale = std::max(1.0, max_abs(s));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(s(i, j) - s(j, i)) > 1e-12 * scale)
                throw Error(ErrorCode::NotSymmetric, fmt::format("entry ({}, {}) differs from its mirror", i, j));

    // cyclic Jacobi rotations
    Mat a = symmetric_part(s);
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off <= 1e-30 * scale * scale) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });

    SymmetricEigen out;
    for (std::size_t i : idx) {
        EigenPair ep{a(i, i), Vec(n)};
        for (std::size_t k = 0; k < n; ++k) ep.vector[k] = v(k, i);
        for (double x : ep.vector)
            if (std::abs(x) > 1e-14) {
                if (x < 0)
                    for (double& y : ep.vector) y = -y;
                break;
            }
        out.values.push_back(ep.value);
        out.pairs.push_back(std::move(ep));
    }
    return out;
}

std::array<EigenPair, 2> eigen_basis_2x2(const Mat& n)
{
    if (n.rows() != 2 || n.cols() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a 2x2 matrix");
    const double diff = n(0, 0) - n(1, 1);
    const double disc = diff * diff + 4.0 * n(0, 1) * n(1, 0);
    const double scale = std::max(1.0, max_abs(n));
    if (!(disc > 1e-24 * scale * scale))
        throw Error(ErrorCode::ComplexOrRepeatedEigenvalues, "discriminant is not positive");
    const auto ev = quadratic_roots(n(0, 0) + n(1, 1), n(0, 0) * n(1, 1) - n(0, 1) * n(1, 0));
    const double l1 = ev[0].real(), l2 = ev[1].real();

    // (1, v): row 0 gives v = (l1 - n00) / n01, row 1 gives v = n10 / (l1 - n11)
    double v;
    if (std::abs(n(0, 1)) >= std::abs(l1 - n(1, 1)))
        v = (l1 - n(0, 0)) / n(0, 1);
    else
        v = n(1, 0) / (l1 - n(1, 1));
    // (u, 1): row 0 gives u = n01 / (l2 - n00), row 1 gives u = (l2 - n11) / n10
    double u;
    if (std::abs(l2 - n(0, 0)) >= std::abs(n(1, 0)))
        u = n(0, 1) / (l2 - n(0, 0));
    else
        u = (l2 - n(1, 1)) / n(1, 0);
    if (!std::isfinite(u) || !std::isfinite(v))
        throw Error(ErrorCode::SingularBasis, "eigenvector cannot take the unit normalization");
    return {EigenPair{l1, {1.0, v}}, EigenPair{l2, {u, 1.0}}};
}

} // namespace patchy
