#include "btcmc/date.hpp"

#include "btcmc/error.hpp"

#include <charconv>
#include <cstdio>

namespace btcmc {

namespace {

bool read_int(std::string_view text, int& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

} // namespace

Date Date::parse(std::string_view text) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        throw Error(ErrorCode::parse, "invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    if (text.size() > 10 && text[10] != ' ' && text[10] != 'T') {
        throw Error(ErrorCode::parse, "invalid date '" + std::string(text) + "'");
    }
    int y = 0, m = 0, d = 0;
    if (!read_int(text.substr(0, 4), y) || !read_int(text.substr(5, 2), m) || !read_int(text.substr(8, 2), d)) {
        throw Error(ErrorCode::parse, "invalid date '" + std::string(text) + "'");
    }
    const auto ymd = std::chrono::year{y} / std::chrono::month{static_cast<unsigned>(m)} /
                     std::chrono::day{static_cast<unsigned>(d)};
    if (!ymd.ok()) {
        throw Error(ErrorCode::parse, "no such calendar date '" + std::string(text.substr(0, 10)) + "'");
    }
    return Date(std::chrono::sys_days(ymd));
}

Date Date::from_unix_seconds(long long seconds) {
    using namespace std::chrono;
    return Date(floor<std::chrono::days>(sys_seconds(std::chrono::seconds(seconds))));
}

Date Date::today_utc() {
    using namespace std::chrono;
    return Date(floor<std::chrono::days>(system_clock::now()));
}

std::string Date::iso() const {
    const std::chrono::year_month_day ymd(days_);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace btcmc
