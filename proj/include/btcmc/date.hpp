#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace btcmc {

/// Calendar date (UTC), day resolution. Serialized as ISO-8601 YYYY-MM-DD.
class Date {
public:
    constexpr Date() = default;
    explicit constexpr Date(std::chrono::sys_days days) : days_(days) {}
    constexpr Date(int year, unsigned month, unsigned day)
        : days_(std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day}) {}

    /// Accepts "YYYY-MM-DD", optionally followed by a time part
    /// ("YYYY-MM-DD hh:mm:ss" or "YYYY-MM-DDThh:mm:ss"), which is dropped.
    static Date parse(std::string_view text);
    static Date from_unix_seconds(long long seconds);
    static Date today_utc();

    std::string iso() const;
    constexpr std::chrono::sys_days days() const { return days_; }

    friend constexpr auto operator<=>(const Date&, const Date&) = default;

private:
    std::chrono::sys_days days_{};
};

} // namespace btcmc
