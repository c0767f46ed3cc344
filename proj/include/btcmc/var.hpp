#pragma once

// Bivariate vector autoregression with intercepts, estimated equation by
// equation by least squares, plus lag-order selection and Granger-Wald
// tests on the fitted model.

#include "btcmc/linalg.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace btcmc {

/// y_t = c + A_1 y_{t-1} + ... + A_p y_{t-p} + u_t for y_t in R^2.
///
/// Within each equation, coefficients are ordered
/// [const, var0 lag1, var1 lag1, var0 lag2, var1 lag2, ...].
struct VarModel {
    int lag_order = 0;
    std::array<std::string, 2> names;
    std::array<double, 2> intercepts{};
    std::vector<linalg::Matrix> lag_matrices;            // A_l(i, j): var j at lag l in equation i
    std::array<std::vector<double>, 2> coefficients;     // 2p + 1 per equation
    std::array<linalg::Matrix, 2> coefficient_covariance; // sigma_ii * (X'X)^-1
    linalg::Matrix residuals;                            // T x 2
    linalg::Matrix residual_covariance;                  // U'U / (T - (2p + 1))
    std::size_t observations = 0;                        // T, the effective sample

    std::size_t coefficients_per_equation() const { return 2 * static_cast<std::size_t>(lag_order) + 1; }
    static std::size_t coefficient_index(std::size_t variable, int lag) {
        return 1 + 2 * static_cast<std::size_t>(lag - 1) + variable;
    }
};

/// Minimum series length accepted for `lags`: 2 * lags + 10.
std::size_t var_min_length(int lags);

/// Fits VAR(lags). The first equation explains `first`, the second
/// `second`. When `sample_start` > lags the first sample_start - lags
/// usable targets are skipped, which lets several orders share one
/// estimation sample.
VarModel var_fit(std::span<const double> first, std::span<const double> second, int lags,
                 std::array<std::string, 2> names = {"y1", "y2"}, std::size_t sample_start = 0);

struct LagDiagnostics {
    int lags = 0;
    double log_det_sigma = 0.0; // ln det of the ML residual covariance U'U / T
    double aic = 0.0;
    double bic = 0.0;
    double whiteness_statistic = 0.0; // sum of per-equation Ljung-Box Q
    int whiteness_df = 0;
    double whiteness_p_value = 1.0;
    bool white = false;               // whiteness_p_value >= 0.05
};

struct LagSelection {
    int chosen = 1;
    int max_lags = 1;
    int whiteness_lags = 0;           // autocorrelation horizon h
    std::size_t sample_size = 0;      // common estimation sample T
    bool whiteness_satisfied = true;  // false when no order passed and BIC alone decided
    std::vector<LagDiagnostics> table;
};

/// Fits VAR(1..max_lags) on a common sample (the first max_lags points held
/// back as presample). Chooses the BIC minimizer among orders whose
/// residuals pass the whiteness test at 5%, preferring the smaller order on
/// ties; if no order passes, the unrestricted BIC minimizer.
LagSelection select_lag_order(std::span<const double> first, std::span<const double> second, int max_lags);

struct GrangerResult {
    std::string cause;
    std::string effect;
    double chi2 = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Wald test that every lag of `cause` has a zero coefficient in the
/// equation of `effect`: W = b' V^-1 b, chi-square with p degrees of
/// freedom under the null.
GrangerResult granger_wald(const VarModel& model, std::size_t cause, std::size_t effect);

} // namespace btcmc
