#include "btcmc/linalg.hpp"

#include "btcmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

namespace btcmc::linalg {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorCode::domain, "matrix product shape mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw Error(ErrorCode::domain, "matrix-vector shape mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
    return out;
}

Matrix gram(const Matrix& x) {
    const std::size_t k = x.cols();
    Matrix g(k, k);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j) g(i, j) += row[i] * row[j];
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
    return g;
}

std::vector<double> cross(const Matrix& x, std::span<const double> y) {
    if (x.rows() != y.size()) throw Error(ErrorCode::domain, "design/response length mismatch");
    std::vector<double> out(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        for (std::size_t i = 0; i < x.cols(); ++i) out[i] += row[i] * y[r];
    }
    return out;
}

namespace {

struct Lu {
    Matrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
};

// Doolittle LU with partial pivoting; nullopt on an exactly zero pivot.
std::optional<Lu> decompose(Matrix a) {
    const std::size_t n = a.rows();
    Lu out{std::move(a), std::vector<std::size_t>(n), 1};
    Matrix& m = out.lu;
    for (std::size_t i = 0; i < n; ++i) out.perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        if (m(piv, k) == 0.0) return std::nullopt;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(out.perm[k], out.perm[piv]);
            out.sign = -out.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            m(i, k) /= m(k, k);
            const double f = m(i, k);
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return out;
}

Matrix lu_inverse(const Lu& d) {
    const std::size_t n = d.lu.rows();
    Matrix inv(n, n);
    std::vector<double> col(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) col[i] = d.perm[i] == c ? 1.0 : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) col[i] -= d.lu(i, j) * col[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j) col[i] -= d.lu(i, j) * col[j];
            col[i] /= d.lu(i, i);
        }
        for (std::size_t i = 0; i < n; ++i) inv(i, c) = col[i];
    }
    return inv;
}

double norm1(const Matrix& m) {
    double best = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) s += std::abs(m(r, c));
        best = std::max(best, s);
    }
    return best;
}

struct Equilibrated {
    Matrix scaled;
    std::vector<double> scale;
};

std::optional<Equilibrated> equilibrate(const Matrix& a) {
    const std::size_t n = a.rows();
    Equilibrated e{a, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        if (!(a(i, i) > 0.0) || !std::isfinite(a(i, i))) return std::nullopt;
        e.scale[i] = 1.0 / std::sqrt(a(i, i));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e.scaled(i, j) = a(i, j) * e.scale[i] * e.scale[j];
    return e;
}

void require_square(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) throw Error(ErrorCode::domain, "expected a non-empty square matrix");
}

} // namespace

double condition_estimate(const Matrix& a) {
    require_square(a);
    const auto e = equilibrate(a);
    if (!e) return std::numeric_limits<double>::infinity();
    const auto d = decompose(e->scaled);
    if (!d) return std::numeric_limits<double>::infinity();
    const double c = norm1(e->scaled) * norm1(lu_inverse(*d));
    return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

Matrix inverse_spd(const Matrix& a) {
    require_square(a);
    const auto e = equilibrate(a);
    if (!e) throw Error(ErrorCode::singular, "normal-equations matrix has a zero or non-positive diagonal");
    const auto d = decompose(e->scaled);
    if (!d) throw Error(ErrorCode::singular, "normal-equations matrix is singular");
    Matrix inv = lu_inverse(*d);
    const double cond = norm1(e->scaled) * norm1(inv);
    if (!std::isfinite(cond) || cond > kMaxCondition) {
        throw Error(ErrorCode::singular, "normal-equations matrix is ill-conditioned (condition " +
                                             std::to_string(cond) + ")");
    }
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) *= e->scale[i] * e->scale[j];
    // Symmetrize away rounding asymmetry.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) inv(i, j) = inv(j, i) = 0.5 * (inv(i, j) + inv(j, i));
    return inv;
}

double determinant(const Matrix& a) {
    require_square(a);
    const auto d = decompose(a);
    if (!d) return 0.0;
    double det = d->sign;
    for (std::size_t i = 0; i < a.rows(); ++i) det *= d->lu(i, i);
    return det;
}

} // namespace btcmc::linalg
