#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace ledgerflow {

// All amounts are carried as integer drops; 1 XRP = 10^6 drops.
// Totals are accumulated in 128-bit integers: a single year of traffic can
// exceed 10^18 drops, uncomfortably close to the int64 ceiling.
inline constexpr std::int64_t kDropsPerXrp = 1'000'000;

using Int128 = __int128;
using Uint128 = unsigned __int128;

inline std::string to_string(Uint128 v) {
    if (v == 0) return "0";
    char buf[40];
    int pos = 40;
    while (v > 0) {
        buf[--pos] = static_cast<char>('0' + static_cast<int>(v % 10));
        v /= 10;
    }
    return std::string(buf + pos, buf + 40);
}

inline std::string to_string(Int128 v) {
    if (v < 0) return "-" + to_string(static_cast<Uint128>(-v));
    return to_string(static_cast<Uint128>(v));
}

inline double xrp_from_drops(std::int64_t drops) {
    return static_cast<double>(drops) / static_cast<double>(kDropsPerXrp);
}

inline double xrp_from_drops(Uint128 drops) {
    return static_cast<double>(drops) / static_cast<double>(kDropsPerXrp);
}

inline std::int64_t drops_from_xrp(double xrp) {
    return std::llround(xrp * static_cast<double>(kDropsPerXrp));
}

// Saturating add for drop tallies fed by untrusted input; amounts close to
// the int64 ceiling would otherwise overflow per-day or per-edge sums.
inline std::int64_t saturating_add_drops(std::int64_t a, std::int64_t b) {
    std::int64_t sum = 0;
    if (__builtin_add_overflow(a, b, &sum)) return std::numeric_limits<std::int64_t>::max();
    return sum;
}

}  // namespace ledgerflow
