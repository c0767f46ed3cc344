#pragma once

#include "btcmc/backtest.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace btcmc::report {

/// Fixed-point display, e.g. format_fixed(0.10131, 3) == "0.101".
std::string format_fixed(double value, int decimals);

/// Two-row "Granger Causality Wald Tests" table: H0, chi2, df, Prob > chi2.
std::string render_granger_table(const GrangerResult& market_to_model, const GrangerResult& model_to_market);

std::string render_ratio(const RatioStats& ratio, const EpisodeDetection& episodes);
std::string render_regressions(const RegressionResult& level, const RegressionResult& log);
std::string render_var(const VarModel& model, const LagSelection& selection, bool lags_from_selection);

/// Human-readable report with every section.
std::string render_text(const BacktestReport& report);

/// Structured report. Keys are sorted and numbers use shortest round-trip
/// formatting, so identical reports serialize to identical bytes.
std::string render_json(const BacktestReport& report);

/// Structured output for the single-analysis subcommands.
std::string render_json_ratio(const RatioStats& ratio, const EpisodeDetection& episodes);
std::string render_json_regressions(const RegressionResult& level, const RegressionResult& log);
std::string render_json_var(const VarModel& model, const LagSelection& selection, bool lags_from_selection,
                            const GrangerResult& market_to_model, const GrangerResult& model_to_market);

/// date,ratio
void write_figure1_csv(std::ostream& out, const RatioStats& ratio);
/// date,market_price,model_price
void write_figure2_csv(std::ostream& out, const PairedSeries& series);

struct WrittenFiles {
    std::filesystem::path text;
    std::filesystem::path json;
    std::filesystem::path figure1;
    std::filesystem::path figure2;
};

/// Writes report.txt, report.json, figure1.csv and figure2.csv into
/// `out_dir`, creating it if needed.
WrittenFiles write_report_files(const BacktestReport& report, const std::filesystem::path& out_dir);

} // namespace btcmc::report
