#include "btcmc/stats.hpp"

#include "btcmc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace btcmc::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw Error(ErrorCode::insufficient_data, "mean of an empty series");
    // Shifting by the first value keeps a constant series exact.
    const double shift = x.front();
    double sum = 0.0;
    for (double v : x) sum += v - shift;
    return shift + sum / static_cast<double>(x.size());
}

double sample_stddev(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// log(x^a e^-x / Gamma(a))
double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

// Series for P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(log_prefactor(a, x));
}

// Continued fraction for Q(a, x) (modified Lentz); for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(log_prefactor(a, x)) * h;
}

void check_gamma_args(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::domain, "incomplete gamma requires a > 0");
    if (std::isnan(x) || x < 0.0) throw Error(ErrorCode::domain, "incomplete gamma requires x >= 0");
}

} // namespace

double regularized_gamma_p(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return std::clamp(gamma_p_series(a, x), 0.0, 1.0);
    return std::clamp(1.0 - gamma_q_continued_fraction(a, x), 0.0, 1.0);
}

double regularized_gamma_q(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
    return std::clamp(gamma_q_continued_fraction(a, x), 0.0, 1.0);
}

double chi2_sf(double x, int df) {
    if (df < 1) throw Error(ErrorCode::domain, "chi-square degrees of freedom must be >= 1");
    if (std::isnan(x) || x < 0.0) throw Error(ErrorCode::domain, "chi-square statistic must be >= 0");
    // Q(1, y) = exp(-y)
    if (df == 2) return std::exp(-0.5 * x);
    return regularized_gamma_q(0.5 * df, 0.5 * x);
}

std::vector<double> autocorrelations(std::span<const double> x, int max_lag) {
    const auto n = x.size();
    if (max_lag < 1 || static_cast<std::size_t>(max_lag) >= n) {
        throw Error(ErrorCode::domain, "autocorrelation lag must satisfy 1 <= h < n (h=" + std::to_string(max_lag) +
                                           ", n=" + std::to_string(n) + ")");
    }
    const double m = mean(x);
    double denom = 0.0;
    for (double v : x) denom += (v - m) * (v - m);
    std::vector<double> r(static_cast<std::size_t>(max_lag), 0.0);
    if (denom == 0.0) return r;
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) num += (x[t] - m) * (x[t - k] - m);
        r[static_cast<std::size_t>(k - 1)] = num / denom;
    }
    return r;
}

PortmanteauResult ljung_box(std::span<const double> residuals, int h, int fitted_lags) {
    const auto n = static_cast<double>(residuals.size());
    if (h < 1 || static_cast<double>(h) >= n) {
        throw Error(ErrorCode::domain, "Ljung-Box requires 1 <= h < n (h=" + std::to_string(h) +
                                           ", n=" + std::to_string(residuals.size()) + ")");
    }
    const auto r = autocorrelations(residuals, h);
    double q = 0.0;
    for (int k = 1; k <= h; ++k) q += r[static_cast<std::size_t>(k - 1)] * r[static_cast<std::size_t>(k - 1)] / (n - k);
    q *= n * (n + 2.0);
    PortmanteauResult out;
    out.statistic = q;
    out.lags = h;
    out.df = fitted_lags > 0 ? std::max(h - fitted_lags, 1) : h;
    out.p_value = chi2_sf(q, out.df);
    return out;
}

} // namespace btcmc::stats
