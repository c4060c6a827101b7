#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "ledgerflow/record.hpp"

namespace ledgerflow {

// Record-level accounting for one ingest run. Every input line lands in
// exactly one bucket, so input_count always reconciles with the other four.
struct FilterReport {
    std::uint64_t input_count = 0;
    std::uint64_t kept_count = 0;
    std::uint64_t dropped_non_xrp = 0;
    std::uint64_t dropped_partial = 0;
    std::uint64_t malformed_count = 0;

    bool reconciles() const {
        return input_count == kept_count + dropped_non_xrp + dropped_partial + malformed_count;
    }

    bool operator==(const FilterReport&) const = default;
};

inline bool is_xrp_to_xrp(const TransactionRecord& r) {
    return r.source_currency == kXrpCode && r.destination_currency == kXrpCode;
}

inline bool is_partial_payment(const TransactionRecord& r) {
    return r.amount_drops != r.delivered_drops;
}

enum class FilterOutcome { kept, non_xrp, partial };

inline FilterOutcome classify_record(const TransactionRecord& r) {
    if (!is_xrp_to_xrp(r)) return FilterOutcome::non_xrp;
    if (is_partial_payment(r)) return FilterOutcome::partial;
    return FilterOutcome::kept;
}

inline void count_outcome(FilterReport& report, FilterOutcome outcome) {
    ++report.input_count;
    switch (outcome) {
        case FilterOutcome::kept: ++report.kept_count; break;
        case FilterOutcome::non_xrp: ++report.dropped_non_xrp; break;
        case FilterOutcome::partial: ++report.dropped_partial; break;
    }
}

inline std::vector<TransactionRecord> filter_xrp_xrp(std::span<const TransactionRecord> records) {
    std::vector<TransactionRecord> kept;
    for (const TransactionRecord& r : records)
        if (is_xrp_to_xrp(r)) kept.push_back(r);
    return kept;
}

inline std::vector<TransactionRecord> filter_partial_payments(
    std::span<const TransactionRecord> records) {
    std::vector<TransactionRecord> kept;
    for (const TransactionRecord& r : records)
        if (!is_partial_payment(r)) kept.push_back(r);
    return kept;
}

inline nlohmann::ordered_json to_json(const FilterReport& report) {
    return nlohmann::ordered_json{{"input_count", report.input_count},
                                  {"kept_count", report.kept_count},
                                  {"dropped_non_xrp", report.dropped_non_xrp},
                                  {"dropped_partial", report.dropped_partial},
                                  {"malformed_count", report.malformed_count}};
}

}  // namespace ledgerflow
