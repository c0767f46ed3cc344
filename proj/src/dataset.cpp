#include "btcmc/dataset.hpp"

#include "btcmc/error.hpp"
#include "btcmc/parallel.hpp"
#include "btcmc/pricing.hpp"
#include "csv_util.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace btcmc {

namespace {

using detail::line_context;

struct Table {
    std::vector<std::string> header;
    // (line number, fields) for every non-blank body row
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

Table read_table(std::istream& in) {
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        std::vector<std::string> fields;
        for (auto f : detail::split_fields(trimmed)) fields.emplace_back(f);
        if (!have_header) {
            for (auto& f : fields) {
                std::transform(f.begin(), f.end(), f.begin(), [](unsigned char c) { return std::tolower(c); });
            }
            table.header = std::move(fields);
            have_header = true;
        } else {
            table.rows.emplace_back(line_no, std::move(fields));
        }
    }
    if (!have_header) throw Error(ErrorCode::parse, "missing header row");
    return table;
}

std::optional<std::size_t> column(const Table& t, std::string_view name) {
    const auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - t.header.begin());
}

std::size_t require_column(const Table& t, std::string_view name) {
    if (auto c = column(t, name)) return *c;
    throw Error(ErrorCode::parse, "line 1: missing required column '" + std::string(name) + "'");
}

double numeric_field(const std::vector<std::string>& fields, std::size_t col, std::size_t line_no,
                     std::string_view name) {
    double v = 0.0;
    if (!detail::try_parse_double(fields[col], v)) {
        throw Error(ErrorCode::parse, line_context(line_no) + "field '" + std::string(name) + "' is not a number: '" +
                                          fields[col] + "'");
    }
    if (!std::isfinite(v) || v <= 0.0) {
        throw Error(ErrorCode::validation, line_context(line_no) + "field '" + std::string(name) +
                                               "' must be finite and > 0, got " + fields[col]);
    }
    return v;
}

Date date_field(const std::vector<std::string>& fields, std::size_t col, std::size_t line_no) {
    try {
        return Date::parse(fields[col]);
    } catch (const Error& e) {
        throw Error(ErrorCode::parse, line_context(line_no) + e.what());
    }
}

void check_width(const Table& t, const std::vector<std::string>& fields, std::size_t line_no) {
    if (fields.size() != t.header.size()) {
        throw Error(ErrorCode::parse, line_context(line_no) + "expected " + std::to_string(t.header.size()) +
                                          " fields, found " + std::to_string(fields.size()));
    }
}

void check_increasing(Date prev, Date cur, std::size_t line_no) {
    if (cur <= prev) {
        throw Error(ErrorCode::validation, line_context(line_no) + "date " + cur.iso() +
                                               (cur == prev ? " duplicates" : " precedes") + " previous date " +
                                               prev.iso());
    }
}

template <class Entry>
std::size_t step_index(const std::vector<Entry>& entries, Date date, Date Entry::*key, const char* what) {
    if (entries.empty()) throw Error(ErrorCode::domain, std::string(what) + " is empty");
    const auto it = std::upper_bound(entries.begin(), entries.end(), date,
                                     [key](Date d, const Entry& e) { return d < e.*key; });
    if (it == entries.begin()) {
        throw Error(ErrorCode::domain, "date " + date.iso() + " precedes first " + what + " entry " +
                                           (entries.front().*key).iso());
    }
    return static_cast<std::size_t>(it - entries.begin()) - 1;
}

} // namespace

std::vector<ObservationRecord> parse_observations(std::istream& in) {
    const Table t = read_table(in);
    const auto c_date = require_column(t, "date");
    const auto c_diff = require_column(t, "difficulty");
    const auto c_price = require_column(t, "price_usd");
    const auto c_eff = column(t, "eff_w_per_ghs");

    std::vector<ObservationRecord> out;
    out.reserve(t.rows.size());
    for (const auto& [line_no, fields] : t.rows) {
        check_width(t, fields, line_no);
        ObservationRecord r;
        r.date = date_field(fields, c_date, line_no);
        r.difficulty = numeric_field(fields, c_diff, line_no, "difficulty");
        r.market_price = numeric_field(fields, c_price, line_no, "price_usd");
        if (c_eff && !fields[*c_eff].empty()) r.efficiency = numeric_field(fields, *c_eff, line_no, "eff_w_per_ghs");
        if (!out.empty()) check_increasing(out.back().date, r.date, line_no);
        out.push_back(r);
    }
    return out;
}

std::vector<ObservationRecord> parse_observations(const std::string& text) {
    std::istringstream in(text);
    return parse_observations(in);
}

void write_observations(std::ostream& out, std::span<const ObservationRecord> records) {
    const bool with_eff =
        std::any_of(records.begin(), records.end(), [](const ObservationRecord& r) { return r.efficiency.has_value(); });
    out << "date,difficulty,price_usd" << (with_eff ? ",eff_w_per_ghs" : "") << '\n';
    for (const auto& r : records) {
        out << r.date.iso() << ',' << detail::format_double(r.difficulty) << ','
            << detail::format_double(r.market_price);
        if (with_eff) {
            out << ',';
            if (r.efficiency) out << detail::format_double(*r.efficiency);
        }
        out << '\n';
    }
}

RewardSchedule::RewardSchedule(std::vector<RewardEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!std::isfinite(e.reward_btc) || e.reward_btc <= 0.0) {
            throw Error(ErrorCode::validation, "reward on " + e.effective.iso() + " must be > 0");
        }
        if (i > 0) {
            const auto& prev = entries_[i - 1];
            if (e.effective <= prev.effective) {
                throw Error(ErrorCode::validation, "reward dates must be strictly increasing at " + e.effective.iso());
            }
            if (e.reward_btc != prev.reward_btc / 2.0) {
                throw Error(ErrorCode::validation, "reward on " + e.effective.iso() + " is not half the previous reward");
            }
        }
    }
}

RewardSchedule RewardSchedule::mainnet() {
    return RewardSchedule({{Date(2009, 1, 3), 50.0}, {Date(2012, 11, 28), 25.0}, {Date(2016, 7, 9), 12.5}});
}

std::size_t RewardSchedule::index_at(Date date) const {
    return step_index(entries_, date, &RewardEntry::effective, "reward schedule");
}

double reward_at(Date date, const RewardSchedule& schedule) {
    return schedule.entries()[schedule.index_at(date)].reward_btc;
}

RewardSchedule parse_rewards(std::istream& in) {
    const Table t = read_table(in);
    const auto c_date = require_column(t, "date");
    const auto c_reward = require_column(t, "reward_btc");
    std::vector<RewardEntry> entries;
    for (const auto& [line_no, fields] : t.rows) {
        check_width(t, fields, line_no);
        entries.push_back({date_field(fields, c_date, line_no), numeric_field(fields, c_reward, line_no, "reward_btc")});
    }
    return RewardSchedule(std::move(entries));
}

EfficiencyTable::EfficiencyTable(std::vector<EfficiencyEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!std::isfinite(e.w_per_ghs) || e.w_per_ghs <= 0.0) {
            throw Error(ErrorCode::validation, "efficiency on " + e.date.iso() + " must be > 0");
        }
        if (i == 0) continue;
        const auto& prev = entries_[i - 1];
        if (e.date <= prev.date) {
            throw Error(ErrorCode::validation, "efficiency dates must be strictly increasing at " + e.date.iso());
        }
        if (e.w_per_ghs > prev.w_per_ghs) {
            warnings_.push_back("efficiency increases from " + detail::format_double(prev.w_per_ghs) + " to " +
                                detail::format_double(e.w_per_ghs) + " W per GH/s on " + e.date.iso());
        }
    }
}

std::size_t EfficiencyTable::index_at(Date date) const {
    return step_index(entries_, date, &EfficiencyEntry::date, "efficiency table");
}

EfficiencyTable parse_efficiency(std::istream& in) {
    const Table t = read_table(in);
    const auto c_date = require_column(t, "date");
    const auto c_eff = require_column(t, "w_per_ghs");
    std::vector<EfficiencyEntry> entries;
    for (const auto& [line_no, fields] : t.rows) {
        check_width(t, fields, line_no);
        entries.push_back({date_field(fields, c_date, line_no), numeric_field(fields, c_eff, line_no, "w_per_ghs")});
    }
    return EfficiencyTable(std::move(entries));
}

EfficiencyLookup efficiency_at(Date date, const EfficiencyTable& table) {
    const auto i = table.index_at(date);
    const bool past_end = i + 1 == table.entries().size() && date > table.entries().back().date;
    return {table.entries()[i].w_per_ghs, past_end};
}

PairedSeries build_backtest_series(std::span<const ObservationRecord> records, const RewardSchedule& schedule,
                                   const EfficiencyTable& table, double electricity_price) {
    if (records.empty()) throw Error(ErrorCode::insufficient_data, "no observations to back-test");

    PairedSeries out;
    std::vector<pricing::CostParams> costs;
    std::vector<pricing::NetworkParams> nets;
    out.dates.reserve(records.size());
    out.market_prices.reserve(records.size());
    costs.reserve(records.size());
    nets.reserve(records.size());

    for (const auto& r : records) {
        try {
            double eff = 0.0;
            if (r.efficiency) {
                eff = *r.efficiency;
            } else {
                if (table.empty()) {
                    throw Error(ErrorCode::validation, "no inline efficiency and no efficiency table");
                }
                const auto lookup = efficiency_at(r.date, table);
                eff = lookup.w_per_ghs;
                if (lookup.carried_forward) {
                    out.warnings.push_back("efficiency for " + r.date.iso() + " carried forward from " +
                                           table.entries().back().date.iso());
                }
            }
            costs.emplace_back(electricity_price, eff);
            nets.emplace_back(r.difficulty, reward_at(r.date, schedule));
        } catch (const Error& e) {
            throw Error(e.code(), "observation " + r.date.iso() + ": " + e.what());
        }
        out.dates.push_back(r.date);
        out.market_prices.push_back(r.market_price);
    }
    out.model_prices = parallel::model_prices(costs, nets);
    return out;
}

} // namespace btcmc
