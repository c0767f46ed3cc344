#pragma once

#include "btcmc/dataset.hpp"
#include "btcmc/date.hpp"
#include "btcmc/regression.hpp"
#include "btcmc/var.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace btcmc {

/// Market-to-model price ratios with summary statistics.
struct RatioStats {
    std::vector<Date> dates;
    std::vector<double> ratios;
    double mean = 0.0;
    double stddev = 0.0; // sample (n - 1)
    double min = 0.0;
    double max = 0.0;
};

RatioStats ratio_series(const PairedSeries& pair);

struct BubbleEpisode {
    Date start;
    Date end;
    Date peak_date;
    double peak_ratio = 0.0;
    std::size_t start_index = 0;
    std::size_t end_index = 0;
};

struct EpisodeDetection {
    double threshold = 0.0;
    double entry_k = 2.0;
    int min_len = 2;
    bool degenerate = false; // stddev was zero, no threshold
    std::vector<BubbleEpisode> episodes;
};

/// Heuristic: maximal runs of at least `min_len` consecutive ratios above
/// mean + entry_k * stddev of the full sample.
EpisodeDetection detect_episodes(const RatioStats& stats, double entry_k = 2.0, int min_len = 2);

struct BacktestConfig {
    double electricity_price = 0.135;
    std::optional<int> lags = 2; // nullopt selects the order from the data
    int max_lags = 8;
    double entry_k = 2.0;
    int min_len = 2;
};

struct Provenance {
    std::string version;
    std::vector<std::pair<std::string, std::string>> inputs;     // role -> path
    std::vector<std::pair<std::string, std::string>> parameters;
    std::optional<std::string> generated_at;                     // omitted for reproducible output
};

struct BacktestReport {
    PairedSeries series;
    RatioStats ratio;
    RegressionResult level_fit; // market on model
    RegressionResult log_fit;   // ln market on ln model
    LagSelection lag_selection;
    bool lags_from_selection = false;
    VarModel var;               // on (ln market, ln model)
    GrangerResult market_to_model;
    GrangerResult model_to_market;
    EpisodeDetection episodes;
    std::vector<std::string> warnings;
    Provenance provenance;
};

inline constexpr const char* kVersion = "1.0.0";

BacktestReport run_backtest(std::span<const ObservationRecord> records, const RewardSchedule& schedule,
                            const EfficiencyTable& efficiency, const BacktestConfig& config);

} // namespace btcmc
