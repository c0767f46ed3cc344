#pragma once

#include <span>
#include <vector>

namespace btcmc::stats {

double mean(std::span<const double> x);

/// Sample standard deviation (n - 1 divisor); 0 for fewer than two values.
double sample_stddev(std::span<const double> x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// directly (not by subtraction) in the upper tail.
double regularized_gamma_q(double a, double x);

/// Upper-tail probability of the chi-square distribution with `df`
/// degrees of freedom, Q(df/2, x/2), clamped to [0, 1].
double chi2_sf(double x, int df);

/// Sample autocorrelations r_1..r_h about the sample mean.
std::vector<double> autocorrelations(std::span<const double> x, int max_lag);

struct PortmanteauResult {
    double statistic = 0.0;
    int lags = 0;
    int df = 0;
    double p_value = 1.0;
};

/// Ljung-Box Q = n(n+2) sum_{k=1..h} r_k^2 / (n-k). When the residuals come
/// from a fitted autoregression pass its lag count as `fitted_lags`; the
/// reference distribution is then chi-square with max(h - fitted_lags, 1)
/// degrees of freedom.
PortmanteauResult ljung_box(std::span<const double> residuals, int h, int fitted_lags = 0);

} // namespace btcmc::stats
