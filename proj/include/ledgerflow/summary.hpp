#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ledgerflow/amounts.hpp"
#include "ledgerflow/errors.hpp"
#include "ledgerflow/record.hpp"

namespace ledgerflow {

struct YearlySummaryRow {
    int year = 0;
    std::uint64_t txn_count = 0;
    std::uint64_t n_sources = 0;
    std::uint64_t n_destinations = 0;
    std::uint64_t n_all_nodes = 0;  // |sources ∪ destinations|
    Uint128 total_drops = 0;
};

struct YearlySummary {
    std::vector<YearlySummaryRow> years;  // ascending by year
    YearlySummaryRow all_years;           // year field left at 0
};

/// Record-by-record accumulator, so ingest can summarize a stream without
/// holding the records. Memory is bounded by the number of distinct accounts.
class YearlySummaryBuilder {
public:
    void add(const TransactionRecord& r) {
        Tally& t = per_year_[year_of_date(r.date())];
        for (Tally* tally : {&t, &overall_}) {
            ++tally->txn_count;
            tally->total_drops += static_cast<Uint128>(r.amount_drops);
            tally->sources.insert(r.source);
            tally->destinations.insert(r.destination);
            tally->all.insert(r.source);
            tally->all.insert(r.destination);
        }
    }

    YearlySummary build() const {
        YearlySummary summary;
        for (const auto& [year, tally] : per_year_)
            summary.years.push_back(to_row(year, tally));
        summary.all_years = to_row(0, overall_);
        return summary;
    }

private:
    struct Tally {
        std::uint64_t txn_count = 0;
        Uint128 total_drops = 0;
        std::unordered_set<std::string> sources, destinations, all;
    };

    static YearlySummaryRow to_row(int year, const Tally& t) {
        return YearlySummaryRow{year,          t.txn_count, t.sources.size(),
                                t.destinations.size(), t.all.size(),  t.total_drops};
    }

    std::map<int, Tally> per_year_;
    Tally overall_;
};

inline YearlySummary yearly_summary(std::span<const TransactionRecord> records) {
    YearlySummaryBuilder builder;
    for (const TransactionRecord& r : records) builder.add(r);
    return builder.build();
}

inline void write_yearly_summary_csv(std::ostream& out, const YearlySummary& summary) {
    out << "year,txn_count,n_sources,n_destinations,n_all_nodes,total_drops,total_xrp\n";
    const auto write_row = [&](std::string_view label, const YearlySummaryRow& row) {
        char xrp[40];
        std::snprintf(xrp, sizeof(xrp), "%.6f", xrp_from_drops(row.total_drops));
        out << label << ',' << row.txn_count << ',' << row.n_sources << ','
            << row.n_destinations << ',' << row.n_all_nodes << ',' << to_string(row.total_drops)
            << ',' << xrp << '\n';
    };
    for (const YearlySummaryRow& row : summary.years)
        write_row(std::to_string(row.year), row);
    if (!summary.years.empty()) write_row("all", summary.all_years);
    if (!out) throw IoError("failed to write yearly summary CSV");
}

}  // namespace ledgerflow
