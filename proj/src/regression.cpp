#include "btcmc/regression.hpp"

#include "btcmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace btcmc {

LinearFit least_squares(const linalg::Matrix& design, std::span<const double> y) {
    if (design.rows() != y.size()) throw Error(ErrorCode::domain, "design/response length mismatch");
    if (design.rows() < design.cols()) {
        throw Error(ErrorCode::insufficient_data, "fewer observations than regressors");
    }
    LinearFit fit;
    const linalg::Matrix xtx = linalg::gram(design);
    const std::vector<double> xty = linalg::cross(design, y);
    fit.xtx_inverse = linalg::inverse_spd(xtx);
    fit.coefficients = fit.xtx_inverse * xty;
    // One step of iterative refinement on the normal equations.
    std::vector<double> gap = xtx * fit.coefficients;
    for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = xty[i] - gap[i];
    const std::vector<double> correction = fit.xtx_inverse * gap;
    for (std::size_t i = 0; i < correction.size(); ++i) fit.coefficients[i] += correction[i];
    fit.residuals.resize(y.size());
    for (std::size_t r = 0; r < design.rows(); ++r) {
        const auto row = design.row(r);
        double fitted = 0.0;
        for (std::size_t c = 0; c < design.cols(); ++c) fitted += row[c] * fit.coefficients[c];
        fit.residuals[r] = y[r] - fitted;
        fit.sse += fit.residuals[r] * fit.residuals[r];
    }
    return fit;
}

RegressionResult ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::domain, "regression series differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw Error(ErrorCode::insufficient_data, "regression needs at least 3 observations");
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
        throw Error(ErrorCode::singular, "regressor is constant");
    }

    linalg::Matrix design(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = x[i];
    }
    LinearFit fit = least_squares(design, y);

    RegressionResult out;
    out.n = n;
    out.intercept = fit.coefficients[0];
    out.slope = fit.coefficients[1];

    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(n);
    double sst = 0.0;
    for (double v : y) sst += (v - y_mean) * (v - y_mean);
    if (sst == 0.0) {
        out.r_squared = 0.0;
        out.degenerate = true;
    } else {
        out.r_squared = std::clamp(1.0 - fit.sse / sst, 0.0, 1.0);
    }

    const double sigma2 = fit.sse / static_cast<double>(n - 2);
    out.intercept_se = std::sqrt(sigma2 * fit.xtx_inverse(0, 0));
    out.slope_se = std::sqrt(sigma2 * fit.xtx_inverse(1, 1));
    out.residuals = std::move(fit.residuals);
    return out;
}

std::vector<double> log_transform(std::span<const double> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw Error(ErrorCode::domain, "log transform requires positive values; index " + std::to_string(i) +
                                               " is " + std::to_string(values[i]));
        }
        out[i] = std::log(values[i]);
    }
    return out;
}

} // namespace btcmc
