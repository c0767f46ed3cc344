#pragma once

// Dense row-major matrices for the small (at most a few dozen columns)
// normal-equation systems of the regression code.

#include <cstddef>
#include <span>
#include <vector>

namespace btcmc::linalg {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<double> column(std::size_t c) const;

    Matrix transpose() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// X^T X
Matrix gram(const Matrix& x);
/// X^T y
std::vector<double> cross(const Matrix& x, std::span<const double> y);

/// Condition number above which a system is treated as singular.
inline constexpr double kMaxCondition = 1e12;

/// Inverse of a symmetric positive (semi)definite matrix.
///
/// The matrix is first equilibrated, B = S A S with S = diag(1/sqrt(a_ii)),
/// so the condition test is invariant to rescaling individual regressors.
/// B is inverted by LU with partial pivoting and its 1-norm condition
/// number computed exactly; above kMaxCondition (or on a zero pivot /
/// non-positive diagonal) ErrorCode::singular is thrown.
Matrix inverse_spd(const Matrix& a);

/// 1-norm condition number of the equilibrated matrix (infinity if singular).
double condition_estimate(const Matrix& a);

/// Determinant via LU with partial pivoting.
double determinant(const Matrix& a);

} // namespace btcmc::linalg
