#include "btcmc/var.hpp"

#include "btcmc/error.hpp"
#include "btcmc/regression.hpp"
#include "btcmc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace btcmc {

namespace {

constexpr double kWhitenessLevel = 0.05;

void check_inputs(std::span<const double> first, std::span<const double> second, int lags) {
    if (lags < 1) throw Error(ErrorCode::domain, "VAR lag order must be >= 1");
    if (first.size() != second.size()) throw Error(ErrorCode::domain, "VAR series differ in length");
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (!std::isfinite(first[i]) || !std::isfinite(second[i])) {
            throw Error(ErrorCode::domain, "VAR series contain a non-finite value at index " + std::to_string(i));
        }
    }
}

} // namespace

std::size_t var_min_length(int lags) { return 2 * static_cast<std::size_t>(lags) + 10; }

VarModel var_fit(std::span<const double> first, std::span<const double> second, int lags,
                 std::array<std::string, 2> names, std::size_t sample_start) {
    check_inputs(first, second, lags);
    const std::size_t n = first.size();
    if (n < var_min_length(lags)) {
        throw Error(ErrorCode::insufficient_data, "VAR(" + std::to_string(lags) + ") needs at least " +
                                                      std::to_string(var_min_length(lags)) + " observations, got " +
                                                      std::to_string(n));
    }
    const std::size_t start = std::max(sample_start, static_cast<std::size_t>(lags));
    const std::size_t k = 2 * static_cast<std::size_t>(lags) + 1;
    if (n <= start + k) throw Error(ErrorCode::insufficient_data, "VAR estimation sample is too short");
    const std::size_t t_count = n - start;

    linalg::Matrix design(t_count, k);
    std::array<std::vector<double>, 2> targets{std::vector<double>(t_count), std::vector<double>(t_count)};
    const std::array<std::span<const double>, 2> series{first, second};
    for (std::size_t r = 0; r < t_count; ++r) {
        const std::size_t t = start + r;
        design(r, 0) = 1.0;
        for (int l = 1; l <= lags; ++l) {
            for (std::size_t j = 0; j < 2; ++j) {
                design(r, VarModel::coefficient_index(j, l)) = series[j][t - static_cast<std::size_t>(l)];
            }
        }
        targets[0][r] = first[t];
        targets[1][r] = second[t];
    }

    VarModel m;
    m.lag_order = lags;
    m.names = std::move(names);
    m.observations = t_count;
    m.residuals = linalg::Matrix(t_count, 2);
    m.lag_matrices.assign(static_cast<std::size_t>(lags), linalg::Matrix(2, 2));

    std::array<LinearFit, 2> fits{least_squares(design, targets[0]), least_squares(design, targets[1])};
    for (std::size_t i = 0; i < 2; ++i) {
        m.coefficients[i] = fits[i].coefficients;
        m.intercepts[i] = fits[i].coefficients[0];
        for (int l = 1; l <= lags; ++l)
            for (std::size_t j = 0; j < 2; ++j)
                m.lag_matrices[static_cast<std::size_t>(l - 1)](i, j) =
                    fits[i].coefficients[VarModel::coefficient_index(j, l)];
        for (std::size_t r = 0; r < t_count; ++r) m.residuals(r, i) = fits[i].residuals[r];
    }

    const double dof = static_cast<double>(t_count - k);
    m.residual_covariance = linalg::Matrix(2, 2);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < t_count; ++r) s += m.residuals(r, a) * m.residuals(r, b);
            m.residual_covariance(a, b) = s / dof;
        }
    for (std::size_t i = 0; i < 2; ++i) {
        linalg::Matrix cov = fits[i].xtx_inverse;
        const double sigma = m.residual_covariance(i, i);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) cov(a, b) *= sigma;
        m.coefficient_covariance[i] = std::move(cov);
    }
    return m;
}

LagSelection select_lag_order(std::span<const double> first, std::span<const double> second, int max_lags) {
    if (max_lags < 1) throw Error(ErrorCode::domain, "maximum lag order must be >= 1");
    check_inputs(first, second, max_lags);
    if (first.size() < var_min_length(max_lags)) {
        throw Error(ErrorCode::insufficient_data, "lag selection up to " + std::to_string(max_lags) + " needs at least " +
                                                      std::to_string(var_min_length(max_lags)) + " observations");
    }

    LagSelection sel;
    sel.max_lags = max_lags;
    sel.sample_size = first.size() - static_cast<std::size_t>(max_lags);
    const double t_count = static_cast<double>(sel.sample_size);
    sel.whiteness_lags = std::min(std::max(10, max_lags + 2), static_cast<int>(sel.sample_size) - 1);

    for (int p = 1; p <= max_lags; ++p) {
        const VarModel m = var_fit(first, second, p, {"y1", "y2"}, static_cast<std::size_t>(max_lags));
        LagDiagnostics d;
        d.lags = p;

        linalg::Matrix sigma_ml(2, 2);
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) {
                double s = 0.0;
                for (std::size_t r = 0; r < m.observations; ++r) s += m.residuals(r, a) * m.residuals(r, b);
                sigma_ml(a, b) = s / t_count;
            }
        const double det = linalg::determinant(sigma_ml);
        d.log_det_sigma = det > 0.0 ? std::log(det) : -std::numeric_limits<double>::infinity();
        const double params = 2.0 * static_cast<double>(m.coefficients_per_equation());
        d.aic = d.log_det_sigma + 2.0 * params / t_count;
        d.bic = d.log_det_sigma + std::log(t_count) * params / t_count;

        for (std::size_t i = 0; i < 2; ++i) {
            const auto lb = stats::ljung_box(m.residuals.column(i), sel.whiteness_lags, p);
            d.whiteness_statistic += lb.statistic;
            d.whiteness_df += lb.df;
        }
        d.whiteness_p_value = stats::chi2_sf(d.whiteness_statistic, d.whiteness_df);
        d.white = d.whiteness_p_value >= kWhitenessLevel;
        sel.table.push_back(d);
    }

    const auto pick = [&](bool require_white) -> int {
        int best = 0;
        double best_bic = std::numeric_limits<double>::infinity();
        for (const auto& d : sel.table) {
            if (require_white && !d.white) continue;
            if (d.bic < best_bic) {
                best_bic = d.bic;
                best = d.lags;
            }
        }
        return best;
    };
    sel.chosen = pick(true);
    if (sel.chosen == 0) {
        sel.whiteness_satisfied = false;
        sel.chosen = pick(false);
        if (sel.chosen == 0) sel.chosen = 1;
    }
    return sel;
}

GrangerResult granger_wald(const VarModel& model, std::size_t cause, std::size_t effect) {
    if (cause > 1 || effect > 1 || cause == effect) {
        throw Error(ErrorCode::domain, "Granger test needs two distinct variables (0 or 1)");
    }
    const int p = model.lag_order;
    const auto& coef = model.coefficients[effect];
    const auto& cov = model.coefficient_covariance[effect];

    std::vector<double> b(static_cast<std::size_t>(p));
    linalg::Matrix v(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
    for (int a = 1; a <= p; ++a) {
        const auto ia = VarModel::coefficient_index(cause, a);
        b[static_cast<std::size_t>(a - 1)] = coef[ia];
        for (int c = 1; c <= p; ++c) {
            v(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(c - 1)) =
                cov(ia, VarModel::coefficient_index(cause, c));
        }
    }
    // A perfect fit leaves zero residual variance; any nonzero coefficient
    // is then infinitely significant.
    bool zero_variance = false;
    for (std::size_t i = 0; i < b.size(); ++i) zero_variance = zero_variance || !(v(i, i) > 0.0);
    double w = 0.0;
    if (zero_variance) {
        const bool any_nonzero = std::any_of(b.begin(), b.end(), [](double x) { return x != 0.0; });
        w = any_nonzero ? std::numeric_limits<double>::infinity() : 0.0;
    } else {
        const linalg::Matrix v_inv = linalg::inverse_spd(v);
        const std::vector<double> vb = v_inv * b;
        for (std::size_t i = 0; i < b.size(); ++i) w += b[i] * vb[i];
    }

    GrangerResult out;
    out.cause = model.names[cause];
    out.effect = model.names[effect];
    out.chi2 = std::max(w, 0.0);
    out.df = p;
    out.p_value = stats::chi2_sf(out.chi2, out.df);
    return out;
}

} // namespace btcmc
