#include "btcmc/backtest.hpp"

#include "btcmc/error.hpp"
#include "btcmc/stats.hpp"
#include "csv_util.hpp"

#include <algorithm>
#include <string>

namespace btcmc {

RatioStats ratio_series(const PairedSeries& pair) {
    if (pair.size() == 0) throw Error(ErrorCode::insufficient_data, "ratio of an empty series");
    if (pair.market_prices.size() != pair.size() || pair.model_prices.size() != pair.size()) {
        throw Error(ErrorCode::domain, "paired series have unequal lengths");
    }
    RatioStats out;
    out.dates = pair.dates;
    out.ratios.resize(pair.size());
    for (std::size_t i = 0; i < pair.size(); ++i) {
        if (!(pair.model_prices[i] > 0.0)) {
            throw Error(ErrorCode::domain, "model price on " + pair.dates[i].iso() + " is not positive");
        }
        out.ratios[i] = pair.market_prices[i] / pair.model_prices[i];
    }
    out.mean = stats::mean(out.ratios);
    out.stddev = stats::sample_stddev(out.ratios);
    const auto [lo, hi] = std::minmax_element(out.ratios.begin(), out.ratios.end());
    out.min = *lo;
    out.max = *hi;
    return out;
}

EpisodeDetection detect_episodes(const RatioStats& stats, double entry_k, int min_len) {
    if (!(entry_k > 0.0)) throw Error(ErrorCode::domain, "episode entry_k must be > 0");
    if (min_len < 1) throw Error(ErrorCode::domain, "episode min_len must be >= 1");
    EpisodeDetection out;
    out.entry_k = entry_k;
    out.min_len = min_len;
    if (stats.stddev == 0.0) {
        out.degenerate = true;
        out.threshold = stats.mean;
        return out;
    }
    out.threshold = stats.mean + entry_k * stats.stddev;

    const std::size_t n = stats.ratios.size();
    std::size_t i = 0;
    while (i < n) {
        if (stats.ratios[i] <= out.threshold) {
            ++i;
            continue;
        }
        std::size_t j = i;
        std::size_t peak = i;
        while (j < n && stats.ratios[j] > out.threshold) {
            if (stats.ratios[j] > stats.ratios[peak]) peak = j;
            ++j;
        }
        if (j - i >= static_cast<std::size_t>(min_len)) {
            out.episodes.push_back(
                {stats.dates[i], stats.dates[j - 1], stats.dates[peak], stats.ratios[peak], i, j - 1});
        }
        i = j;
    }
    return out;
}

BacktestReport run_backtest(std::span<const ObservationRecord> records, const RewardSchedule& schedule,
                            const EfficiencyTable& efficiency, const BacktestConfig& config) {
    BacktestReport rep;
    rep.series = build_backtest_series(records, schedule, efficiency, config.electricity_price);
    rep.warnings = efficiency.warnings();
    rep.warnings.insert(rep.warnings.end(), rep.series.warnings.begin(), rep.series.warnings.end());

    rep.ratio = ratio_series(rep.series);
    rep.level_fit = ols_fit(rep.series.model_prices, rep.series.market_prices);
    const auto log_market = log_transform(rep.series.market_prices);
    const auto log_model = log_transform(rep.series.model_prices);
    rep.log_fit = ols_fit(log_model, log_market);

    rep.lag_selection = select_lag_order(log_market, log_model, config.max_lags);
    rep.lags_from_selection = !config.lags.has_value();
    const int p = config.lags.value_or(rep.lag_selection.chosen);
    rep.var = var_fit(log_market, log_model, p, {"market", "model"});
    rep.market_to_model = granger_wald(rep.var, 0, 1);
    rep.model_to_market = granger_wald(rep.var, 1, 0);
    if (!rep.lag_selection.whiteness_satisfied) {
        rep.warnings.push_back("no VAR order up to " + std::to_string(config.max_lags) +
                               " passed the residual whiteness test; lag choice made by BIC alone");
    }

    rep.episodes = detect_episodes(rep.ratio, config.entry_k, config.min_len);
    if (rep.episodes.degenerate) rep.warnings.push_back("ratio standard deviation is zero; no episode threshold");

    rep.provenance.version = kVersion;
    rep.provenance.parameters = {
        {"electricity_price", detail::format_double(config.electricity_price)},
        {"lags", config.lags ? std::to_string(*config.lags) : "auto"},
        {"max_lags", std::to_string(config.max_lags)},
        {"entry_k", detail::format_double(config.entry_k)},
        {"min_len", std::to_string(config.min_len)},
        {"observations", std::to_string(records.size())},
    };
    return rep;
}

} // namespace btcmc
