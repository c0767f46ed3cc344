#pragma once

#include "btcmc/linalg.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace btcmc {

/// Simple regression y = intercept + slope * x.
struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;          // 0 when y is constant (degenerate)
    double slope_se = 0.0;
    double intercept_se = 0.0;
    std::vector<double> residuals;
    std::size_t n = 0;
    bool degenerate = false;         // total sum of squares was zero
};

/// Least squares with an intercept. Requires n >= 3 and non-constant x.
/// Standard errors use the unbiased residual variance SSE / (n - 2).
RegressionResult ols_fit(std::span<const double> x, std::span<const double> y);

/// Multiple regression on an explicit design matrix (include a column of
/// ones for an intercept).
struct LinearFit {
    std::vector<double> coefficients;
    std::vector<double> residuals;
    linalg::Matrix xtx_inverse;
    double sse = 0.0;
};

LinearFit least_squares(const linalg::Matrix& design, std::span<const double> y);

/// Elementwise natural log; every value must be > 0.
std::vector<double> log_transform(std::span<const double> values);

} // namespace btcmc
