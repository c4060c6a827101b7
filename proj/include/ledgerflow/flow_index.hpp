#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ledgerflow/amounts.hpp"
#include "ledgerflow/concentration.hpp"
#include "ledgerflow/errors.hpp"
#include "ledgerflow/record.hpp"

namespace ledgerflow {

/// Per-account daily flows. Only days with positive flow are stored; a map
/// with no entries means the account never moved anything in that direction.
struct DailyFlowPair {
    std::map<Date, std::int64_t> inflow;
    std::map<Date, std::int64_t> outflow;

    bool operator==(const DailyFlowPair&) const = default;
};

namespace detail {

inline void add_flow(std::map<Date, std::int64_t>& flows, Date day, std::int64_t drops) {
    if (drops <= 0) return;
    std::int64_t& total = flows[day];
    total = saturating_add_drops(total, drops);
}

}  // namespace detail

/// Sums the account's received and sent amounts per UTC day. A self-loop
/// counts on both sides; the index measures directional activity, not net
/// balance.
inline DailyFlowPair build_daily_flows(std::span<const TransactionRecord> records,
                                       std::string_view account) {
    DailyFlowPair flows;
    for (const TransactionRecord& r : records) {
        if (r.destination == account) detail::add_flow(flows.inflow, r.date(), r.amount_drops);
        if (r.source == account) detail::add_flow(flows.outflow, r.date(), r.amount_drops);
    }
    return flows;
}

/// Single-pass variant over every account appearing in the records; entry by
/// entry identical to calling build_daily_flows per account.
inline std::map<std::string, DailyFlowPair> build_all_daily_flows(
    std::span<const TransactionRecord> records) {
    std::unordered_map<std::string, DailyFlowPair> flows;
    for (const TransactionRecord& r : records) {
        const Date day = r.date();
        detail::add_flow(flows[r.destination].inflow, day, r.amount_drops);
        detail::add_flow(flows[r.source].outflow, day, r.amount_drops);
    }
    return {flows.begin(), flows.end()};
}

/// The pair of discounted effective daily-transaction counts. Each side is
/// the effective-count index of that side's daily shares, scaled by the
/// side's maximum daily flow over the maximum across both sides, so the side
/// that never carried the account's biggest day is discounted toward 0.
struct FlowIndex {
    double a_in = 0.0;
    double a_out = 0.0;

    bool operator==(const FlowIndex&) const = default;
};

inline FlowIndex flow_index(const DailyFlowPair& flows, int order = 20) {
    const auto max_flow = [](const std::map<Date, std::int64_t>& side) {
        std::int64_t best = 0;
        for (const auto& [day, drops] : side) best = std::max(best, drops);
        return best;
    };
    const std::int64_t max_in = max_flow(flows.inflow);
    const std::int64_t max_out = max_flow(flows.outflow);
    const std::int64_t joint_max = std::max(max_in, max_out);
    if (joint_max == 0) return {};

    const auto side_component = [&](const std::map<Date, std::int64_t>& side,
                                    std::int64_t side_max) {
        if (side.empty()) return 0.0;
        std::vector<double> raw;
        raw.reserve(side.size());
        for (const auto& [day, drops] : side) raw.push_back(static_cast<double>(drops));
        const double effective_days = modified_inverse_hh(normalize(raw), order);
        return effective_days * (static_cast<double>(side_max) / static_cast<double>(joint_max));
    };
    return {side_component(flows.inflow, max_in), side_component(flows.outflow, max_out)};
}

enum class NodeClass { in, out, body, dormant };

inline std::string_view to_string(NodeClass c) {
    switch (c) {
        case NodeClass::in: return "in";
        case NodeClass::out: return "out";
        case NodeClass::body: return "body";
        case NodeClass::dormant: return "dormant";
    }
    return "dormant";
}

inline NodeClass node_class_from_string(std::string_view s) {
    if (s == "in") return NodeClass::in;
    if (s == "out") return NodeClass::out;
    if (s == "body") return NodeClass::body;
    if (s == "dormant") return NodeClass::dormant;
    throw DomainError("unknown node class: " + std::string(s));
}

/// IN nodes feed the network (outflow-dominant sources), OUT nodes drain it
/// (inflow-dominant sinks), BODY trades both ways above the cutoff, DORMANT
/// clears neither side.
inline NodeClass classify_node(const FlowIndex& index, double cutoff = 0.5) {
    if (!(cutoff > 0.0)) throw DomainError("classify_node: cutoff must be positive");
    const bool in_low = index.a_in <= cutoff;
    const bool out_low = index.a_out <= cutoff;
    if (in_low && out_low) return NodeClass::dormant;
    if (!in_low && !out_low) return NodeClass::body;
    return out_low ? NodeClass::out : NodeClass::in;
}

struct FlowTableRow {
    std::string account;
    FlowIndex index;
    NodeClass node_class = NodeClass::dormant;
    std::int64_t max_in_drops = 0;
    std::int64_t max_out_drops = 0;
    std::uint64_t n_days_in = 0;
    std::uint64_t n_days_out = 0;
};

/// One row per account seen in the records, sorted by account id.
inline std::vector<FlowTableRow> flow_table(std::span<const TransactionRecord> records,
                                            int order = 20, double cutoff = 0.5) {
    std::vector<FlowTableRow> rows;
    for (const auto& [account, flows] : build_all_daily_flows(records)) {
        FlowTableRow row;
        row.account = account;
        row.index = flow_index(flows, order);
        row.node_class = classify_node(row.index, cutoff);
        for (const auto& [day, drops] : flows.inflow)
            row.max_in_drops = std::max(row.max_in_drops, drops);
        for (const auto& [day, drops] : flows.outflow)
            row.max_out_drops = std::max(row.max_out_drops, drops);
        row.n_days_in = flows.inflow.size();
        row.n_days_out = flows.outflow.size();
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(),
              [](const FlowTableRow& a, const FlowTableRow& b) { return a.account < b.account; });
    return rows;
}

inline constexpr std::string_view kFlowTableHeader =
    "account,a_in,a_out,class,max_in_drops,max_out_drops,n_days_in,n_days_out";

inline void write_flow_table_csv(std::ostream& out, std::span<const FlowTableRow> rows) {
    out << kFlowTableHeader << '\n';
    char buf[96];
    for (const FlowTableRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g", row.index.a_in, row.index.a_out);
        out << row.account << ',' << buf << ',' << to_string(row.node_class) << ','
            << row.max_in_drops << ',' << row.max_out_drops << ',' << row.n_days_in << ','
            << row.n_days_out << '\n';
    }
    if (!out) throw IoError("failed to write flow table CSV");
}

inline std::vector<FlowTableRow> read_flow_table_csv(std::istream& in) {
    std::vector<FlowTableRow> rows;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (view.empty()) continue;
        if (!saw_header) {
            if (view != kFlowTableHeader)
                throw DomainError("flow table: unexpected header: " + std::string(view));
            saw_header = true;
            continue;
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = view.find(',', start);
            fields.push_back(view.substr(
                start, comma == std::string_view::npos ? view.size() - start : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 8)
            throw DomainError("flow table: expected 8 fields, got " +
                              std::to_string(fields.size()));
        FlowTableRow row;
        row.account.assign(fields[0]);
        row.index.a_in = std::strtod(std::string(fields[1]).c_str(), nullptr);
        row.index.a_out = std::strtod(std::string(fields[2]).c_str(), nullptr);
        row.node_class = node_class_from_string(fields[3]);
        const auto parse_int = [&](std::string_view f, auto& out_value) {
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), out_value);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw DomainError("flow table: bad integer field: " + std::string(f));
        };
        parse_int(fields[4], row.max_in_drops);
        parse_int(fields[5], row.max_out_drops);
        parse_int(fields[6], row.n_days_in);
        parse_int(fields[7], row.n_days_out);
        rows.push_back(std::move(row));
    }
    if (in.bad()) throw IoError("flow table stream failed mid-read");
    return rows;
}

}  // namespace ledgerflow
