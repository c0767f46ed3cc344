#include "btcmc/fetch.hpp"

#include "btcmc/error.hpp"
#include "csv_util.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace btcmc::fetch {

namespace {

struct SplitUrl {
    std::string origin; // scheme://host[:port]
    std::string prefix; // path prefix without trailing slash
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorCode::fetch, "base URL lacks a scheme: " + url);
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw Error(ErrorCode::fetch, "unsupported URL scheme: " + scheme);
    const auto path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    out.origin = url.substr(0, path_start);
    if (path_start != std::string::npos) out.prefix = url.substr(path_start);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    if (out.origin.size() <= scheme_end + 3) throw Error(ErrorCode::fetch, "base URL lacks a host: " + url);
    return out;
}

void append_log(const FetchConfig& config, SeriesKind kind, Date day, bool hit) {
    std::ofstream log(config.cache_dir / "fetch.log", std::ios::app);
    log << day.iso() << ' ' << chart_name(kind) << ' ' << (hit ? "cache" : "network") << '\n';
}

Date timestamp_field(std::string_view field) {
    if (field.find('-') != std::string_view::npos) return Date::parse(field);
    long long secs = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), secs);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::parse, "bad timestamp '" + std::string(field) + "'");
    }
    return Date::from_unix_seconds(secs);
}

std::vector<ChartPoint> parse_json_payload(std::string_view payload) {
    const auto doc = nlohmann::json::parse(payload, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("values") || !doc["values"].is_array()) {
        throw Error(ErrorCode::parse, "chart JSON lacks a 'values' array");
    }
    std::vector<ChartPoint> out;
    for (const auto& v : doc["values"]) {
        if (!v.is_object() || !v.contains("x") || !v.contains("y") || !v["x"].is_number() || !v["y"].is_number()) {
            throw Error(ErrorCode::parse, "chart JSON point lacks numeric x/y");
        }
        out.push_back({Date::from_unix_seconds(v["x"].get<long long>()), v["y"].get<double>()});
    }
    return out;
}

std::vector<ChartPoint> parse_csv_payload(std::string_view payload) {
    std::vector<ChartPoint> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= payload.size()) {
        const auto end = payload.find('\n', pos);
        const auto line = detail::trim(payload.substr(pos, end == std::string_view::npos ? end : end - pos));
        pos = end == std::string_view::npos ? payload.size() + 1 : end + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 2) {
            throw Error(ErrorCode::parse, detail::line_context(line_no) + "expected 'timestamp,value'");
        }
        double value = 0.0;
        if (!detail::try_parse_double(fields[1], value)) {
            if (out.empty() && line_no == 1) continue; // header row
            throw Error(ErrorCode::parse, detail::line_context(line_no) + "value is not a number");
        }
        try {
            out.push_back({timestamp_field(fields[0]), value});
        } catch (const Error& e) {
            throw Error(ErrorCode::parse, detail::line_context(line_no) + e.what());
        }
    }
    return out;
}

void require_increasing(const std::vector<ChartPoint>& pts, const char* what) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].date <= pts[i - 1].date) {
            throw Error(ErrorCode::validation, std::string(what) + " series is not strictly increasing at " +
                                                   pts[i].date.iso());
        }
    }
}

} // namespace

std::string_view chart_name(SeriesKind kind) {
    return kind == SeriesKind::difficulty ? "difficulty" : "market-price";
}

SeriesKind parse_kind(std::string_view name) {
    if (name == "difficulty") return SeriesKind::difficulty;
    if (name == "market-price") return SeriesKind::market_price;
    throw Error(ErrorCode::config, "unknown series kind '" + std::string(name) + "' (difficulty|market-price)");
}

FetchConfig FetchConfig::from_environment() {
    FetchConfig c;
    if (const char* url = std::getenv(kBaseUrlEnv); url && *url) c.base_url = url;
    if (const char* dir = std::getenv(kCacheDirEnv); dir && *dir) c.cache_dir = dir;
    return c;
}

std::string request_target(const FetchConfig& config, SeriesKind kind) {
    const auto url = split_url(config.base_url);
    return url.prefix + "/charts/" + std::string(chart_name(kind)) + "?timespan=" + config.timespan + "&format=csv";
}

std::filesystem::path cache_path(const FetchConfig& config, SeriesKind kind, Date day) {
    return config.cache_dir / (std::string(chart_name(kind)) + "-" + day.iso() + ".csv");
}

FetchResult fetch_remote_series(const FetchConfig& config, SeriesKind kind, Date day) {
    const auto path = cache_path(config, kind, day);
    std::error_code ec;
    std::filesystem::create_directories(config.cache_dir, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create cache dir " + config.cache_dir.string() + ": " + ec.message());

    if (std::filesystem::exists(path)) {
        append_log(config, kind, day, true);
        return {path, true};
    }

    const auto url = split_url(config.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(config.timeout);
    client.set_read_timeout(config.timeout);
    client.set_follow_location(true);
    const auto target = request_target(config, kind);
    const auto res = client.Get(target);
    if (!res) {
        throw Error(ErrorCode::fetch, "GET " + url.origin + target + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw Error(ErrorCode::fetch, "GET " + url.origin + target + " returned HTTP " + std::to_string(res->status));
    }
    try {
        if (parse_chart_payload(res->body).empty()) throw Error(ErrorCode::parse, "payload has no data points");
    } catch (const Error& e) {
        throw Error(ErrorCode::fetch, "unparseable " + std::string(chart_name(kind)) + " payload: " + e.what());
    }

    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << res->body;
        if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::io, "cannot move " + tmp.string() + " into place: " + ec.message());
    append_log(config, kind, day, false);
    return {path, false};
}

std::vector<ChartPoint> parse_chart_payload(std::string_view payload) {
    const auto body = detail::trim(payload);
    if (!body.empty() && body.front() == '{') return parse_json_payload(body);
    return parse_csv_payload(body);
}

std::vector<ObservationRecord> resample_to_difficulty_changes(const std::vector<ChartPoint>& difficulty,
                                                              const std::vector<ChartPoint>& price) {
    require_increasing(difficulty, "difficulty");
    require_increasing(price, "market-price");
    std::vector<ObservationRecord> out;
    std::size_t pi = 0;
    bool have_price = false;
    for (std::size_t i = 0; i < difficulty.size(); ++i) {
        if (i > 0 && difficulty[i].value == difficulty[i - 1].value) continue;
        while (pi < price.size() && price[pi].date <= difficulty[i].date) {
            ++pi;
            have_price = true;
        }
        if (!have_price) continue; // no price observed yet
        const auto& d = difficulty[i];
        const double p = price[pi - 1].value;
        if (!(d.value > 0.0) || !(p > 0.0)) continue; // pre-market era reports zero prices
        out.push_back({d.date, d.value, p, std::nullopt});
    }
    return out;
}

} // namespace btcmc::fetch
