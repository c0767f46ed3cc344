#pragma once

#include "btcmc/date.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace btcmc {

/// One difficulty-epoch sample.
struct ObservationRecord {
    Date date;
    double difficulty = 0.0;
    double market_price = 0.0;             // USD/BTC
    std::optional<double> efficiency;      // W per GH/s, when supplied inline

    friend bool operator==(const ObservationRecord&, const ObservationRecord&) = default;
};

/// Parses `date,difficulty,price_usd[,eff_w_per_ghs]` with a header row.
/// Columns are matched by header name, so any order is accepted. Blank
/// lines are skipped. Throws ErrorCode::parse (with line number) on
/// malformed rows and ErrorCode::validation on non-positive values or
/// unsorted/duplicate dates.
std::vector<ObservationRecord> parse_observations(std::istream& in);
std::vector<ObservationRecord> parse_observations(const std::string& text);

/// Canonical form: header `date,difficulty,price_usd[,eff_w_per_ghs]`,
/// ISO dates, shortest round-trip decimals. The efficiency column is
/// written when any record carries one.
void write_observations(std::ostream& out, std::span<const ObservationRecord> records);

struct RewardEntry {
    Date effective;
    double reward_btc;
};

/// Block-reward step function keyed by calendar date. A reward applies
/// from its effective date inclusive.
class RewardSchedule {
public:
    /// Validates: dates strictly increasing, rewards > 0, each successive
    /// reward exactly half the previous.
    explicit RewardSchedule(std::vector<RewardEntry> entries);

    /// 2009-01-03 -> 50, 2012-11-28 -> 25, 2016-07-09 -> 12.5.
    static RewardSchedule mainnet();

    const std::vector<RewardEntry>& entries() const noexcept { return entries_; }

    /// Index of the latest entry effective on or before `date`.
    std::size_t index_at(Date date) const;

private:
    std::vector<RewardEntry> entries_;
};

RewardSchedule parse_rewards(std::istream& in);

/// Block reward (BTC/block) in force on `date`.
double reward_at(Date date, const RewardSchedule& schedule);

struct EfficiencyEntry {
    Date date;
    double w_per_ghs;
};

class EfficiencyTable {
public:
    /// Dates strictly increasing, values > 0. Increases over time are
    /// accepted but reported by warnings().
    explicit EfficiencyTable(std::vector<EfficiencyEntry> entries);

    const std::vector<EfficiencyEntry>& entries() const noexcept { return entries_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    bool empty() const noexcept { return entries_.empty(); }

    std::size_t index_at(Date date) const;

private:
    std::vector<EfficiencyEntry> entries_;
    std::vector<std::string> warnings_;
};

EfficiencyTable parse_efficiency(std::istream& in);

struct EfficiencyLookup {
    double w_per_ghs;
    bool carried_forward; // date is past the last table entry
};

/// Last-observation-carried-forward lookup.
EfficiencyLookup efficiency_at(Date date, const EfficiencyTable& table);

/// Aligned market and model prices.
struct PairedSeries {
    std::vector<Date> dates;
    std::vector<double> market_prices;
    std::vector<double> model_prices;
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return dates.size(); }
};

/// Model price for every record from its difficulty, the reward in force,
/// and its efficiency (inline if present, else from `table`).
PairedSeries build_backtest_series(std::span<const ObservationRecord> records, const RewardSchedule& schedule,
                                   const EfficiencyTable& table, double electricity_price);

} // namespace btcmc
