#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace patchy {

using Vec = std::vector<double>;

// Small dense row-major matrix.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat identity(std::size_t n);
    static Mat diag(const Vec& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Mat operator*(const Mat& x, const Mat& y);
Vec operator*(const Mat& x, const Vec& v);
Mat operator+(const Mat& x, const Mat& y);
Mat operator-(const Mat& x, const Mat& y);
Mat operator*(double s, const Mat& x);
Mat transpose(const Mat& x);
Mat symmetric_part(const Mat& x);
// diag(d)^-1 * x
Mat scale_rows_inv(const Vec& d, const Mat& x);
double max_abs(const Mat& x);
double norm2(const Vec& v);

// All eigenvalues; closed forms for n <= 3, Hessenberg QR above.
std::vector<std::complex<double>> eigenvalues(const Mat& n);

// Largest eigenvalue among those with |imag| <= 1e-10 * (1 + |N|).
double max_real_eigenvalue(const Mat& n);

struct EigenPair {
    double value = 0.0;
    Vec vector;
};

struct SymmetricEigen {
    Vec values;                   // descending
    std::vector<EigenPair> pairs; // unit vectors, first nonzero component positive
};

SymmetricEigen symmetric_eigen(const Mat& s);

// v1 (larger eigenvalue) has first component 1, v2 has second component 1.
std::array<EigenPair, 2> eigen_basis_2x2(const Mat& n);

} // namespace patchy
