#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "ledgerflow/time.hpp"

namespace ledgerflow {

inline constexpr std::string_view kXrpCode = "XRP";

// One ledger entry. `amount_drops` is the stated transaction amount,
// `delivered_drops` what actually arrived; they differ for partial payments.
struct TransactionRecord {
    Timestamp timestamp = 0;
    std::string source;
    std::string destination;
    std::string source_currency{kXrpCode};
    std::string destination_currency{kXrpCode};
    std::int64_t amount_drops = 0;
    std::int64_t delivered_drops = 0;

    bool operator==(const TransactionRecord&) const = default;

    Date date() const { return date_of_timestamp(timestamp); }
};

inline bool is_valid_account_id(std::string_view s) {
    if (s.empty()) return false;
    for (const char c : s)
        if (std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

// 3-4 letter currency code, case-sensitive as stored.
inline bool is_valid_currency_code(std::string_view s) {
    if (s.size() < 3 || s.size() > 4) return false;
    for (const char c : s)
        if (!std::isalpha(static_cast<unsigned char>(c))) return false;
    return true;
}

inline bool is_valid_record(const TransactionRecord& r) {
    return r.amount_drops >= 0 && r.delivered_drops >= 0 && is_valid_account_id(r.source) &&
           is_valid_account_id(r.destination) && is_valid_currency_code(r.source_currency) &&
           is_valid_currency_code(r.destination_currency);
}

}  // namespace ledgerflow
