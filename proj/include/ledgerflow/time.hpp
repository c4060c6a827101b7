#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace ledgerflow {

// Timestamps are Unix epoch seconds (UTC); dates are days since 1970-01-01.
// Day attribution always uses the UTC calendar date.
using Timestamp = std::int64_t;
using Date = std::int32_t;

inline constexpr std::int64_t kSecondsPerDay = 86'400;

// Days since 1970-01-01 from a proleptic Gregorian civil date.
inline constexpr std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

inline constexpr CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), m, d};
}

inline constexpr bool is_leap_year(int y) {
    return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

inline constexpr unsigned days_in_month(int y, unsigned m) {
    constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y)) return 29;
    return lengths[m - 1];
}

inline constexpr Date date_of_timestamp(Timestamp ts) {
    std::int64_t d = ts / kSecondsPerDay;
    if (ts < 0 && ts % kSecondsPerDay != 0) --d;
    return static_cast<Date>(d);
}

inline constexpr int year_of_date(Date d) { return civil_from_days(d).year; }

// 0 = Sunday ... 6 = Saturday (1970-01-01 was a Thursday).
inline constexpr int weekday_of_date(Date d) {
    return static_cast<int>(((d + 4) % 7 + 7) % 7);
}

inline constexpr bool is_weekend(Date d) {
    const int wd = weekday_of_date(d);
    return wd == 0 || wd == 6;
}

namespace detail {

inline bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
    unsigned v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<unsigned>(c - '0');
    }
    out = v;
    return true;
}

}  // namespace detail

// Strict `YYYY-MM-DDThh:mm:ssZ` parse; anything else is rejected.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    if (s.size() != 20) return std::nullopt;
    if (s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z')
        return std::nullopt;
    unsigned y, mo, da, hh, mm, ss;
    if (!detail::parse_fixed_uint(s, 0, 4, y) || !detail::parse_fixed_uint(s, 5, 2, mo) ||
        !detail::parse_fixed_uint(s, 8, 2, da) || !detail::parse_fixed_uint(s, 11, 2, hh) ||
        !detail::parse_fixed_uint(s, 14, 2, mm) || !detail::parse_fixed_uint(s, 17, 2, ss))
        return std::nullopt;
    if (y < 1 || mo < 1 || mo > 12 || da < 1 || da > days_in_month(static_cast<int>(y), mo))
        return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    return days_from_civil(static_cast<int>(y), mo, da) * kSecondsPerDay +
           hh * 3600 + mm * 60 + ss;
}

inline std::string format_date(Date d) {
    const CivilDate c = civil_from_days(d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
    return std::string(buf);
}

inline std::string format_timestamp(Timestamp ts) {
    const Date d = date_of_timestamp(ts);
    const std::int64_t sec = ts - static_cast<std::int64_t>(d) * kSecondsPerDay;
    const CivilDate c = civil_from_days(d);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", c.year, c.month,
                  c.day, static_cast<long long>(sec / 3600),
                  static_cast<long long>(sec / 60 % 60), static_cast<long long>(sec % 60));
    return std::string(buf);
}

inline std::optional<Date> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    unsigned y, mo, da;
    if (!detail::parse_fixed_uint(s, 0, 4, y) || !detail::parse_fixed_uint(s, 5, 2, mo) ||
        !detail::parse_fixed_uint(s, 8, 2, da))
        return std::nullopt;
    if (y < 1 || mo < 1 || mo > 12 || da < 1 || da > days_in_month(static_cast<int>(y), mo))
        return std::nullopt;
    return static_cast<Date>(days_from_civil(static_cast<int>(y), mo, da));
}

}  // namespace ledgerflow
