// btcmc: marginal cost of production model and back-test from the shell.
//
//   btcmc price    --difficulty D --efficiency W --reward B [--electricity P]
//   btcmc backtest --observations F [--efficiency-table F] [--rewards F] --out-dir DIR
//   btcmc regress | var | ratio  --observations F ...
//   btcmc fetch    [--base-url URL] [--kinds difficulty,market-price] [--out-dir DIR]
//
// Every subcommand accepts --config FILE with INI `key = value` lines, keys
// named after the long flags (optionally under a [subcommand] section).
// Flags given on the command line take precedence over the file.

#include "btcmc/backtest.hpp"
#include "btcmc/dataset.hpp"
#include "btcmc/error.hpp"
#include "btcmc/fetch.hpp"
#include "btcmc/pricing.hpp"
#include "btcmc/report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace btcmc;

struct DataOptions {
    std::string observations;
    std::string efficiency_table;
    std::string rewards;
    double electricity = pricing::kDefaultElectricityPrice;
};

struct Loaded {
    std::vector<ObservationRecord> records;
    RewardSchedule schedule = RewardSchedule::mainnet();
    EfficiencyTable efficiency{{}};
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open " + path);
    return in;
}

template <class Parse>
auto parse_file(const std::string& path, Parse parse) {
    auto in = open_input(path);
    try {
        return parse(in);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

Loaded load(const DataOptions& opt) {
    Loaded d;
    d.records = parse_file(opt.observations, [](std::istream& in) { return parse_observations(in); });
    if (!opt.rewards.empty()) d.schedule = parse_file(opt.rewards, parse_rewards);
    if (!opt.efficiency_table.empty()) d.efficiency = parse_file(opt.efficiency_table, parse_efficiency);
    return d;
}

void add_data_options(CLI::App* sub, DataOptions& opt) {
    sub->add_option("--observations", opt.observations, "observations.csv (date,difficulty,price_usd[,eff_w_per_ghs])")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--efficiency-table", opt.efficiency_table, "efficiency.csv (date,w_per_ghs)")
        ->check(CLI::ExistingFile);
    sub->add_option("--rewards", opt.rewards, "rewards.csv (date,reward_btc); default: mainnet halvings")
        ->check(CLI::ExistingFile);
    sub->add_option("--electricity", opt.electricity, "electricity price, USD/kWh")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

std::optional<int> parse_lags(const std::string& text) {
    if (text == "auto") return std::nullopt;
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size() && v >= 1) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::config, "--lags must be a positive integer or 'auto', got '" + text + "'");
}

std::string utc_timestamp() {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    const auto day = std::chrono::floor<std::chrono::days>(now);
    const std::chrono::hh_mm_ss hms(now - day);
    return fmt::format("{}T{:02}:{:02}:{:02}Z", Date(day).iso(), hms.hours().count(), hms.minutes().count(),
                       hms.seconds().count());
}

void add_config_option(CLI::App* sub) {
    // Consumed by expand_config before parsing; declared here for --help.
    sub->add_option("--config", "INI file of key = value defaults (flags win)");
}

bool want_json(const std::string& format) { return format == "json"; }

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Splices the --config file of the chosen subcommand into the argument list,
// right after the subcommand name, as --key=value pairs for every key the
// command line does not set itself.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    if (args.size() < 2) return args;
    const std::string sub = args[1];
    std::optional<std::string> file;
    std::vector<std::string> rest;
    for (std::size_t i = 2; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 == args.size()) throw Error(ErrorCode::config, "--config needs a file name");
            file = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!file) return args;

    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(*file);
    } catch (const CLI::Error& e) {
        throw Error(ErrorCode::config, "config file " + *file + ": " + e.what());
    }
    std::vector<std::string> out{args[0], sub};
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue; // section markers
        if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub)) continue;
        const std::string flag = "--" + item.name;
        if (flag_given(rest, flag)) continue;
        if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "false")) {
            if (item.inputs[0] == "true") out.push_back(flag);
            continue;
        }
        std::string joined;
        for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
        out.push_back(flag + "=" + joined);
    }
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Marginal cost of production pricing model and back-test"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    const auto formats = CLI::IsMember({"table", "json"});

    // price
    double difficulty = 0.0, efficiency = 0.0, reward = 0.0;
    double price_electricity = pricing::kDefaultElectricityPrice;
    std::string price_format = "table";
    auto* price = app.add_subcommand("price", "break-even price (USD/BTC) for one parameter set");
    add_config_option(price);
    price->add_option("--difficulty", difficulty, "network difficulty")->required();
    price->add_option("--efficiency", efficiency, "hardware efficiency, W per GH/s")->required();
    price->add_option("--reward", reward, "block reward, BTC per block")->required();
    price->add_option("--electricity", price_electricity, "electricity price, USD/kWh")->capture_default_str();
    price->add_option("--format", price_format, "table or json")->check(formats)->capture_default_str();

    // backtest / regress / var / ratio
    DataOptions data;
    std::string lags_text = "2";
    int max_p = 8;
    double entry_k = 2.0;
    int min_len = 2;
    std::string out_dir;
    std::string format = "table";
    bool no_timestamps = false;

    auto* backtest = app.add_subcommand("backtest", "full back-test; writes report and figure data files");
    add_config_option(backtest);
    add_data_options(backtest, data);
    backtest->add_option("--lags", lags_text, "VAR lag order, or 'auto' for data-driven selection")
        ->capture_default_str();
    backtest->add_option("--max-p", max_p, "largest lag order considered by selection")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    backtest->add_option("--entry-k", entry_k, "episode threshold in standard deviations")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    backtest->add_option("--min-len", min_len, "minimum episode length in periods")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    backtest->add_option("--out-dir", out_dir, "directory for report.txt, report.json, figure1.csv, figure2.csv")
        ->required();
    backtest->add_option("--format", format, "stdout format: table or json")->check(formats)->capture_default_str();
    backtest->add_flag("--no-provenance-timestamps", no_timestamps, "omit the generation time for reproducible output");

    auto* regress = app.add_subcommand("regress", "OLS of market on model price, levels and logs");
    add_config_option(regress);
    add_data_options(regress, data);
    regress->add_option("--format", format, "table or json")->check(formats)->capture_default_str();

    auto* var = app.add_subcommand("var", "lag selection, VAR on log prices, Granger-Wald tests");
    add_config_option(var);
    add_data_options(var, data);
    var->add_option("--lags", lags_text, "VAR lag order, or 'auto'")->capture_default_str();
    var->add_option("--max-p", max_p, "largest lag order considered by selection")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    var->add_option("--format", format, "table or json")->check(formats)->capture_default_str();

    auto* ratio = app.add_subcommand("ratio", "market/model ratio statistics and premium episodes");
    add_config_option(ratio);
    add_data_options(ratio, data);
    ratio->add_option("--entry-k", entry_k, "episode threshold in standard deviations")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    ratio->add_option("--min-len", min_len, "minimum episode length in periods")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    ratio->add_option("--format", format, "table or json")->check(formats)->capture_default_str();

    // fetch
    auto fetch_cfg = fetch::FetchConfig::from_environment();
    std::vector<std::string> kinds{"difficulty", "market-price"};
    std::string cache_dir = fetch_cfg.cache_dir.string();
    int timeout_s = 30;
    std::string fetch_date;
    std::string observations_out;
    auto* fetch_cmd = app.add_subcommand("fetch", "download raw chart series into the cache");
    add_config_option(fetch_cmd);
    fetch_cmd->add_option("--base-url", fetch_cfg.base_url, "chart API base URL (env BTCMC_BASE_URL)")
        ->capture_default_str();
    fetch_cmd->add_option("--kinds", kinds, "difficulty and/or market-price")->delimiter(',')->capture_default_str();
    fetch_cmd->add_option("--out-dir", cache_dir, "cache directory (env BTCMC_CACHE_DIR)")->capture_default_str();
    fetch_cmd->add_option("--timeout", timeout_s, "per-request timeout, seconds")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    fetch_cmd->add_option("--date", fetch_date, "cache key date (YYYY-MM-DD); default today (UTC)");
    fetch_cmd->add_option("--observations-out", observations_out,
                          "also write observations resampled to difficulty changes (needs both kinds)");

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const Error& e) {
        std::cerr << "btcmc: error[" << to_string(e.code()) << "]: " << e.what() << "\n";
        return exit_status(e.code());
    }
    std::vector<const char*> arg_ptrs;
    for (const auto& a : args) arg_ptrs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(arg_ptrs.size()), arg_ptrs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "btcmc: error[" << to_string(ErrorCode::config) << "]: " << e.what() << "\n";
        return exit_status(ErrorCode::config);
    }

    try {
        if (*price) {
            const double p = pricing::model_price(pricing::CostParams(price_electricity, efficiency),
                                                  pricing::NetworkParams(difficulty, reward));
            if (want_json(price_format)) {
                std::cout << nlohmann::json{{"model_price_usd_per_btc", p}}.dump() << "\n";
            } else {
                std::cout << report::format_fixed(p, 2) << "\n";
            }
            return 0;
        }

        if (*fetch_cmd) {
            fetch_cfg.cache_dir = cache_dir;
            fetch_cfg.timeout = std::chrono::seconds(timeout_s);
            const Date day = fetch_date.empty() ? Date::today_utc() : Date::parse(fetch_date);
            std::vector<std::pair<fetch::SeriesKind, std::filesystem::path>> got;
            for (const auto& k : kinds) {
                const auto kind = fetch::parse_kind(k);
                const auto res = fetch::fetch_remote_series(fetch_cfg, kind, day);
                std::cout << (res.cache_hit ? "cached  " : "fetched ") << res.path.string() << "\n";
                got.emplace_back(kind, res.path);
            }
            if (!observations_out.empty()) {
                std::vector<fetch::ChartPoint> diff, px;
                for (const auto& [kind, path] : got) {
                    auto in = open_input(path.string());
                    const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
                    (kind == fetch::SeriesKind::difficulty ? diff : px) = fetch::parse_chart_payload(body);
                }
                if (diff.empty() || px.empty()) {
                    throw Error(ErrorCode::config, "--observations-out needs both difficulty and market-price");
                }
                const auto records = fetch::resample_to_difficulty_changes(diff, px);
                std::ofstream out(observations_out);
                if (!out) throw Error(ErrorCode::io, "cannot open " + observations_out + " for writing");
                write_observations(out, records);
                std::cout << "wrote   " << observations_out << " (" << records.size() << " observations)\n";
            }
            return 0;
        }

        const Loaded d = load(data);
        for (const auto& w : d.efficiency.warnings()) std::cerr << "btcmc: warning: " << w << "\n";

        if (*backtest) {
            BacktestConfig cfg;
            cfg.electricity_price = data.electricity;
            cfg.lags = parse_lags(lags_text);
            cfg.max_lags = max_p;
            cfg.entry_k = entry_k;
            cfg.min_len = min_len;
            BacktestReport rep = run_backtest(d.records, d.schedule, d.efficiency, cfg);
            rep.provenance.inputs.emplace_back("observations", data.observations);
            rep.provenance.inputs.emplace_back("efficiency_table",
                                               data.efficiency_table.empty() ? "(inline)" : data.efficiency_table);
            rep.provenance.inputs.emplace_back("rewards", data.rewards.empty() ? "(built-in mainnet)" : data.rewards);
            if (!no_timestamps) rep.provenance.generated_at = utc_timestamp();
            report::write_report_files(rep, out_dir);
            std::cout << (want_json(format) ? report::render_json(rep) : report::render_text(rep));
            return 0;
        }

        const PairedSeries series = build_backtest_series(d.records, d.schedule, d.efficiency, data.electricity);
        for (const auto& w : series.warnings) std::cerr << "btcmc: warning: " << w << "\n";

        if (*regress) {
            const auto level = ols_fit(series.model_prices, series.market_prices);
            const auto log = ols_fit(log_transform(series.model_prices), log_transform(series.market_prices));
            std::cout << (want_json(format) ? report::render_json_regressions(level, log)
                                            : report::render_regressions(level, log));
        } else if (*var) {
            const auto log_market = log_transform(series.market_prices);
            const auto log_model = log_transform(series.model_prices);
            const auto selection = select_lag_order(log_market, log_model, max_p);
            const auto lags = parse_lags(lags_text);
            const auto model = var_fit(log_market, log_model, lags.value_or(selection.chosen), {"market", "model"});
            const auto m2m = granger_wald(model, 0, 1);
            const auto mod2m = granger_wald(model, 1, 0);
            if (want_json(format)) {
                std::cout << report::render_json_var(model, selection, !lags.has_value(), m2m, mod2m);
            } else {
                std::cout << report::render_var(model, selection, !lags.has_value()) << "\n"
                          << report::render_granger_table(m2m, mod2m);
            }
        } else if (*ratio) {
            const auto stats = ratio_series(series);
            const auto episodes = detect_episodes(stats, entry_k, min_len);
            std::cout << (want_json(format) ? report::render_json_ratio(stats, episodes)
                                            : report::render_ratio(stats, episodes));
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "btcmc: error[" << to_string(e.code()) << "]: " << e.what() << "\n";
        return exit_status(e.code());
    } catch (const std::exception& e) {
        std::cerr << "btcmc: error[io]: " << e.what() << "\n";
        return exit_status(ErrorCode::io);
    }
}
