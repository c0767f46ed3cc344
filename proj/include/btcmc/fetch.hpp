#pragma once

// Retrieval of raw chart series (difficulty, market price) from a
// blockchain-statistics HTTP endpoint, with an on-disk cache, and the
// resampling that turns them into difficulty-epoch observations.

#include "btcmc/dataset.hpp"
#include "btcmc/date.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace btcmc::fetch {

enum class SeriesKind { difficulty, market_price };

/// Chart name used in the URL path and cache file name
/// ("difficulty", "market-price").
std::string_view chart_name(SeriesKind kind);
SeriesKind parse_kind(std::string_view name);

inline constexpr const char* kDefaultBaseUrl = "https://api.blockchain.info";
inline constexpr const char* kBaseUrlEnv = "BTCMC_BASE_URL";
inline constexpr const char* kCacheDirEnv = "BTCMC_CACHE_DIR";

struct FetchConfig {
    std::string base_url = kDefaultBaseUrl;
    std::filesystem::path cache_dir = "cache";
    std::chrono::seconds timeout{30};
    std::string timespan = "all";

    /// Defaults overridden by BTCMC_BASE_URL / BTCMC_CACHE_DIR when set.
    static FetchConfig from_environment();
};

/// GET path for a chart: "<prefix>/charts/<name>?timespan=<span>&format=csv".
std::string request_target(const FetchConfig& config, SeriesKind kind);

struct FetchResult {
    std::filesystem::path path;
    bool cache_hit = false;
};

/// Cache file for `kind` fetched on `day`: <cache_dir>/<name>-<YYYY-MM-DD>.csv
std::filesystem::path cache_path(const FetchConfig& config, SeriesKind kind, Date day);

/// Returns the cached payload for (kind, day) if present; otherwise issues
/// one GET, checks the payload parses, and writes it atomically to the
/// cache. Every call appends "<day> <name> cache|network" to
/// <cache_dir>/fetch.log. Transport failures, non-2xx statuses and
/// unparseable payloads throw ErrorCode::fetch and leave the cache as it was.
FetchResult fetch_remote_series(const FetchConfig& config, SeriesKind kind, Date day = Date::today_utc());

struct ChartPoint {
    Date date;
    double value;
};

/// Accepts either CSV rows "timestamp,value" (timestamp as ISO date or
/// date-time, or unix seconds; an optional header is skipped) or the JSON
/// form {"values":[{"x":unix_seconds,"y":value},...]}. Order is preserved.
std::vector<ChartPoint> parse_chart_payload(std::string_view payload);

/// One observation per difficulty change: each date where the difficulty
/// differs from the previous point (the first point included), paired with
/// the latest market price at or before that date. Both inputs must be
/// strictly increasing in date (ErrorCode::validation otherwise).
std::vector<ObservationRecord> resample_to_difficulty_changes(const std::vector<ChartPoint>& difficulty,
                                                              const std::vector<ChartPoint>& price);

} // namespace btcmc::fetch
