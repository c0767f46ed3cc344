#include "btcmc/report.hpp"

#include "btcmc/error.hpp"
#include "btcmc/stats.hpp"
#include "csv_util.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <ostream>

namespace btcmc::report {

namespace {

using nlohmann::json;

constexpr double kSignificance = 0.05;

constexpr const char* kStationarityCaveat =
    "VAR is estimated on log levels without unit-root pre-testing; Wald p-values assume stationarity.";
constexpr const char* kEpisodeCaveat =
    "Episode detection is a heuristic (runs above mean + k*stddev of the ratio), not a formal bubble test.";

std::string hypothesis(const GrangerResult& g) {
    return fmt::format("{} does not Granger cause {}", g.cause, g.effect);
}

json regression_json(const RegressionResult& r) {
    return {{"slope", r.slope},
            {"intercept", r.intercept},
            {"r_squared", r.r_squared},
            {"slope_se", r.slope_se},
            {"intercept_se", r.intercept_se},
            {"n", r.n},
            {"degenerate", r.degenerate}};
}

json granger_json(const GrangerResult& g) {
    return {{"null_hypothesis", hypothesis(g)},
            {"cause", g.cause},
            {"effect", g.effect},
            {"chi2", g.chi2},
            {"df", g.df},
            {"p_value", g.p_value},
            {"reject_at_5pct", g.p_value < kSignificance}};
}

json var_json(const VarModel& m) {
    json equations = json::array();
    for (std::size_t i = 0; i < 2; ++i) {
        json coefs = json::array();
        coefs.push_back({{"term", "const"}, {"value", m.coefficients[i][0]},
                         {"se", std::sqrt(m.coefficient_covariance[i](0, 0))}});
        for (int l = 1; l <= m.lag_order; ++l) {
            for (std::size_t j = 0; j < 2; ++j) {
                const auto idx = VarModel::coefficient_index(j, l);
                coefs.push_back({{"term", fmt::format("L{}.{}", l, m.names[j])},
                                 {"value", m.coefficients[i][idx]},
                                 {"se", std::sqrt(m.coefficient_covariance[i](idx, idx))}});
            }
        }
        equations.push_back({{"equation", m.names[i]}, {"coefficients", coefs}});
    }
    json cov = json::array();
    for (std::size_t a = 0; a < 2; ++a)
        cov.push_back({m.residual_covariance(a, 0), m.residual_covariance(a, 1)});
    return {{"lags", m.lag_order}, {"observations", m.observations}, {"equations", equations},
            {"residual_covariance", cov}};
}

json ratio_json(const RatioStats& r) {
    return {{"mean", r.mean}, {"stddev", r.stddev}, {"min", r.min}, {"max", r.max}, {"n", r.ratios.size()}};
}

json episodes_json(const EpisodeDetection& d) {
    json list = json::array();
    for (const auto& e : d.episodes) {
        list.push_back({{"start", e.start.iso()},
                        {"end", e.end.iso()},
                        {"peak_date", e.peak_date.iso()},
                        {"peak_ratio", e.peak_ratio}});
    }
    return {{"heuristic", true},  {"entry_k", d.entry_k},       {"min_len", d.min_len},
            {"threshold", d.threshold}, {"degenerate", d.degenerate}, {"list", list}};
}

json lag_selection_json(const LagSelection& sel) {
    json table = json::array();
    for (const auto& d : sel.table) {
        table.push_back({{"lags", d.lags},
                         {"log_det_sigma", d.log_det_sigma},
                         {"aic", d.aic},
                         {"bic", d.bic},
                         {"whiteness_statistic", d.whiteness_statistic},
                         {"whiteness_df", d.whiteness_df},
                         {"whiteness_p_value", d.whiteness_p_value},
                         {"white", d.white}});
    }
    return {{"chosen", sel.chosen},
            {"max_lags", sel.max_lags},
            {"whiteness_lags", sel.whiteness_lags},
            {"sample_size", sel.sample_size},
            {"whiteness_satisfied", sel.whiteness_satisfied},
            {"table", table}};
}

json direction_json(const GrangerResult& market_to_model, const GrangerResult& model_to_market) {
    return {{"model_to_market_significant", model_to_market.p_value < kSignificance},
            {"market_to_model_significant", market_to_model.p_value < kSignificance}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error(ErrorCode::io, "failed writing " + path.string());
}

} // namespace

std::string format_fixed(double value, int decimals) { return fmt::format("{:.{}f}", value, decimals); }

std::string render_granger_table(const GrangerResult& market_to_model, const GrangerResult& model_to_market) {
    std::string out = "Granger Causality Wald Tests\n";
    out += fmt::format("{:<4}{:<50}{:>10}{:>5}{:>14}\n", "", "H0", "chi2", "df", "Prob > chi2");
    int row = 1;
    for (const auto* g : {&market_to_model, &model_to_market}) {
        out += fmt::format("{:<4}{:<50}{:>10}{:>5}{:>14}\n", fmt::format("{}:", row++), hypothesis(*g),
                           format_fixed(g->chi2, 3), g->df, format_fixed(g->p_value, 3));
    }
    return out;
}

std::string render_ratio(const RatioStats& ratio, const EpisodeDetection& episodes) {
    std::string out = "Market / model price ratio\n";
    out += fmt::format("  observations  {}\n", ratio.ratios.size());
    out += fmt::format("  mean          {}\n", format_fixed(ratio.mean, 3));
    out += fmt::format("  stddev        {}\n", format_fixed(ratio.stddev, 3));
    out += fmt::format("  min / max     {} / {}\n", format_fixed(ratio.min, 3), format_fixed(ratio.max, 3));
    out += fmt::format("\nPremium episodes (heuristic: ratio > mean + {}*stddev for >= {} periods)\n",
                       detail::format_double(episodes.entry_k), episodes.min_len);
    if (episodes.degenerate) {
        out += "  none (ratio stddev is zero)\n";
        return out;
    }
    out += fmt::format("  threshold     {}\n", format_fixed(episodes.threshold, 3));
    if (episodes.episodes.empty()) out += "  none detected\n";
    for (const auto& e : episodes.episodes) {
        out += fmt::format("  {} .. {}  peak {} on {}\n", e.start.iso(), e.end.iso(), format_fixed(e.peak_ratio, 3),
                           e.peak_date.iso());
    }
    return out;
}

std::string render_regressions(const RegressionResult& level, const RegressionResult& log) {
    std::string out = "OLS: market price on model price\n";
    out += fmt::format("{:<10}{:>14}{:>14}{:>14}{:>8}{:>6}\n", "", "slope", "intercept", "slope se", "R2", "n");
    const auto row = [](const char* name, const RegressionResult& r) {
        return fmt::format("{:<10}{:>14}{:>14}{:>14}{:>8}{:>6}{}\n", name, format_fixed(r.slope, 4),
                           format_fixed(r.intercept, 4), format_fixed(r.slope_se, 4), format_fixed(r.r_squared, 3),
                           r.n, r.degenerate ? "  (degenerate: constant response)" : "");
    };
    out += row("levels", level);
    out += row("log-log", log);
    return out;
}

std::string render_var(const VarModel& model, const LagSelection& selection, bool lags_from_selection) {
    std::string out = fmt::format("VAR lag selection (common sample T = {}, whiteness horizon h = {})\n",
                                  selection.sample_size, selection.whiteness_lags);
    out += fmt::format("{:>4}{:>12}{:>12}{:>12}{:>12}{:>6}{:>8}\n", "p", "ln det", "AIC", "BIC", "LB Q", "df", "LB p");
    for (const auto& d : selection.table) {
        out += fmt::format("{:>4}{:>12}{:>12}{:>12}{:>12}{:>6}{:>8}{}\n", d.lags, format_fixed(d.log_det_sigma, 4),
                           format_fixed(d.aic, 4), format_fixed(d.bic, 4), format_fixed(d.whiteness_statistic, 3),
                           d.whiteness_df, format_fixed(d.whiteness_p_value, 3), d.lags == selection.chosen ? "  *" : "");
    }
    out += fmt::format("selected p = {}{}\n", selection.chosen,
                       selection.whiteness_satisfied ? "" : " (no order passed whiteness; BIC only)");
    out += fmt::format("\nVAR({}) on log series, T = {} ({})\n", model.lag_order, model.observations,
                       lags_from_selection ? "order from selection" : "order fixed by configuration");
    for (std::size_t i = 0; i < 2; ++i) {
        out += fmt::format("  equation {}:\n", model.names[i]);
        out += fmt::format("    {:<14}{:>12}{:>12}\n", "const", format_fixed(model.coefficients[i][0], 4),
                           format_fixed(std::sqrt(model.coefficient_covariance[i](0, 0)), 4));
        for (int l = 1; l <= model.lag_order; ++l) {
            for (std::size_t j = 0; j < 2; ++j) {
                const auto idx = VarModel::coefficient_index(j, l);
                out += fmt::format("    {:<14}{:>12}{:>12}\n", fmt::format("L{}.{}", l, model.names[j]),
                                   format_fixed(model.coefficients[i][idx], 4),
                                   format_fixed(std::sqrt(model.coefficient_covariance[i](idx, idx)), 4));
            }
        }
    }
    return out;
}

std::string render_text(const BacktestReport& r) {
    std::string out = fmt::format("Marginal cost of production back-test ({} observations, {} .. {})\n\n",
                                  r.series.size(), r.series.dates.front().iso(), r.series.dates.back().iso());
    out += render_ratio(r.ratio, r.episodes);
    out += "\n" + render_regressions(r.level_fit, r.log_fit);
    out += "\n" + render_var(r.var, r.lag_selection, r.lags_from_selection);
    out += "\n" + render_granger_table(r.market_to_model, r.model_to_market);
    out += fmt::format("\nDirection: model -> market {} at 5%; market -> model {} at 5%.\n",
                       r.model_to_market.p_value < kSignificance ? "significant" : "not significant",
                       r.market_to_model.p_value < kSignificance ? "significant" : "not significant");
    out += "\nCaveats\n";
    out += fmt::format("  - {}\n  - {}\n", kStationarityCaveat, kEpisodeCaveat);
    if (!r.warnings.empty()) {
        out += "\nWarnings\n";
        for (const auto& w : r.warnings) out += "  - " + w + "\n";
    }
    out += fmt::format("\nversion {}", r.provenance.version);
    if (r.provenance.generated_at) out += fmt::format(", generated {}", *r.provenance.generated_at);
    out += "\n";
    return out;
}

std::string render_json(const BacktestReport& r) {
    json inputs = json::object();
    for (const auto& [k, v] : r.provenance.inputs) inputs[k] = v;
    json params = json::object();
    for (const auto& [k, v] : r.provenance.parameters) params[k] = v;
    json provenance = {{"version", r.provenance.version}, {"inputs", inputs}, {"parameters", params}};
    if (r.provenance.generated_at) provenance["generated_at"] = *r.provenance.generated_at;

    const json doc = {
        {"provenance", provenance},
        {"sample", {{"observations", r.series.size()},
                    {"first_date", r.series.dates.front().iso()},
                    {"last_date", r.series.dates.back().iso()}}},
        {"ratio", ratio_json(r.ratio)},
        {"level_regression", regression_json(r.level_fit)},
        {"log_regression", regression_json(r.log_fit)},
        {"lag_selection", lag_selection_json(r.lag_selection)},
        {"var", var_json(r.var)},
        {"var_lags_source", r.lags_from_selection ? "selection" : "configured"},
        {"granger", json::array({granger_json(r.market_to_model), granger_json(r.model_to_market)})},
        {"direction", direction_json(r.market_to_model, r.model_to_market)},
        {"episodes", episodes_json(r.episodes)},
        {"caveats", json::array({kStationarityCaveat, kEpisodeCaveat})},
        {"warnings", r.warnings},
    };
    return doc.dump(2) + "\n";
}

std::string render_json_ratio(const RatioStats& ratio, const EpisodeDetection& episodes) {
    const json doc = {{"ratio", ratio_json(ratio)}, {"episodes", episodes_json(episodes)}};
    return doc.dump(2) + "\n";
}

std::string render_json_regressions(const RegressionResult& level, const RegressionResult& log) {
    const json doc = {{"level_regression", regression_json(level)}, {"log_regression", regression_json(log)}};
    return doc.dump(2) + "\n";
}

std::string render_json_var(const VarModel& model, const LagSelection& selection, bool lags_from_selection,
                            const GrangerResult& market_to_model, const GrangerResult& model_to_market) {
    const json doc = {
        {"lag_selection", lag_selection_json(selection)},
        {"var", var_json(model)},
        {"var_lags_source", lags_from_selection ? "selection" : "configured"},
        {"granger", json::array({granger_json(market_to_model), granger_json(model_to_market)})},
        {"direction", direction_json(market_to_model, model_to_market)},
        {"caveats", json::array({kStationarityCaveat})},
    };
    return doc.dump(2) + "\n";
}

void write_figure1_csv(std::ostream& out, const RatioStats& ratio) {
    out << "date,ratio\n";
    for (std::size_t i = 0; i < ratio.ratios.size(); ++i) {
        out << ratio.dates[i].iso() << ',' << detail::format_double(ratio.ratios[i]) << '\n';
    }
}

void write_figure2_csv(std::ostream& out, const PairedSeries& series) {
    out << "date,market_price,model_price\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.dates[i].iso() << ',' << detail::format_double(series.market_prices[i]) << ','
            << detail::format_double(series.model_prices[i]) << '\n';
    }
}

WrittenFiles write_report_files(const BacktestReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + out_dir.string() + ": " + ec.message());

    WrittenFiles files{out_dir / "report.txt", out_dir / "report.json", out_dir / "figure1.csv",
                       out_dir / "figure2.csv"};
    write_file(files.text, render_text(report));
    write_file(files.json, render_json(report));
    std::ostringstream f1, f2;
    write_figure1_csv(f1, report.ratio);
    write_figure2_csv(f2, report.series);
    write_file(files.figure1, f1.str());
    write_file(files.figure2, f2.str());
    return files;
}

} // namespace btcmc::report
