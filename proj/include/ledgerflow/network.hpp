#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ledgerflow/amounts.hpp"
#include "ledgerflow/errors.hpp"
#include "ledgerflow/flow_index.hpp"
#include "ledgerflow/record.hpp"
#include "ledgerflow/stats.hpp"

namespace ledgerflow {

struct EdgeStats {
    std::int64_t total_drops = 0;
    std::uint64_t txn_count = 0;

    bool operator==(const EdgeStats&) const = default;
};

/// Directed weighted graph over a selected node set. Parallel transactions
/// are merged per (source, destination) pair; self-loops are kept.
struct ThresholdNetwork {
    std::int64_t threshold_drops = 0;
    std::set<std::string> nodes;
    std::map<std::pair<std::string, std::string>, EdgeStats> edges;
};

/// Accounts on either end of at least one transaction of `threshold_drops`
/// or more (boundary inclusive).
inline std::set<std::string> select_big_nodes(std::span<const TransactionRecord> records,
                                              std::int64_t threshold_drops) {
    std::set<std::string> nodes;
    for (const TransactionRecord& r : records) {
        if (r.amount_drops >= threshold_drops) {
            nodes.insert(r.source);
            nodes.insert(r.destination);
        }
    }
    return nodes;
}

/// Subgraph induced by `node_set`: every transaction with both endpoints
/// selected contributes, whatever its amount. Nodes with no surviving
/// transaction stay as isolated nodes.
inline ThresholdNetwork induced_network(std::span<const TransactionRecord> records,
                                        const std::set<std::string>& node_set,
                                        std::int64_t threshold_drops) {
    ThresholdNetwork network;
    network.threshold_drops = threshold_drops;
    network.nodes = node_set;
    for (const TransactionRecord& r : records) {
        if (r.amount_drops <= 0) continue;
        if (!node_set.contains(r.source) || !node_set.contains(r.destination)) continue;
        EdgeStats& edge = network.edges[{r.source, r.destination}];
        edge.total_drops = saturating_add_drops(edge.total_drops, r.amount_drops);
        ++edge.txn_count;
    }
    return network;
}

enum class Direction { in, out };

struct DegreeCcdf {
    CcdfCurve curve;                   // over nodes with positive degree
    std::uint64_t zero_degree_nodes = 0;
};

/// Distinct-counterparty degree distribution. Degree counts neighbors, not
/// transactions; a self-loop makes a node its own counterparty.
inline DegreeCcdf degree_ccdf(const ThresholdNetwork& network, Direction direction) {
    if (network.nodes.empty()) throw DomainError("degree_ccdf: empty network");
    std::unordered_map<std::string_view, std::uint64_t> degree;
    for (const auto& [endpoints, stats] : network.edges) {
        const std::string& counted =
            direction == Direction::in ? endpoints.second : endpoints.first;
        ++degree[counted];
    }
    DegreeCcdf result;
    std::vector<double> positive;
    for (const std::string& node : network.nodes) {
        const auto it = degree.find(node);
        if (it == degree.end())
            ++result.zero_degree_nodes;
        else
            positive.push_back(static_cast<double>(it->second));
    }
    if (!positive.empty()) result.curve = empirical_ccdf(positive);
    return result;
}

struct ClassEdgeSummary {
    std::uint64_t edge_pairs = 0;  // merged (source, destination) pairs
    std::uint64_t txn_count = 0;
    std::int64_t total_drops = 0;
};

struct WalnutPartition {
    std::set<std::string> in_set, out_set, body_set, dormant_set;
    std::map<std::pair<NodeClass, NodeClass>, ClassEdgeSummary> cross_edges;

    const std::set<std::string>& set_for(NodeClass c) const {
        switch (c) {
            case NodeClass::in: return in_set;
            case NodeClass::out: return out_set;
            case NodeClass::body: return body_set;
            case NodeClass::dormant: return dormant_set;
        }
        return dormant_set;
    }
};

/// Partitions the network's nodes by their flow-index class and summarizes
/// edges between classes. The flow table must cover every node; it is meant
/// to come from the full record set, not the induced subgraph.
inline WalnutPartition walnut_decomposition(const ThresholdNetwork& network,
                                            std::span<const FlowTableRow> table,
                                            double cutoff = 0.5) {
    std::unordered_map<std::string_view, const FlowTableRow*> by_account;
    by_account.reserve(table.size());
    for (const FlowTableRow& row : table) by_account.emplace(row.account, &row);

    WalnutPartition partition;
    std::unordered_map<std::string_view, NodeClass> classes;
    for (const std::string& node : network.nodes) {
        const auto it = by_account.find(node);
        if (it == by_account.end())
            throw DomainError("walnut_decomposition: node missing from flow table: " + node);
        const NodeClass c = classify_node(it->second->index, cutoff);
        classes.emplace(node, c);
        switch (c) {
            case NodeClass::in: partition.in_set.insert(node); break;
            case NodeClass::out: partition.out_set.insert(node); break;
            case NodeClass::body: partition.body_set.insert(node); break;
            case NodeClass::dormant: partition.dormant_set.insert(node); break;
        }
    }
    for (const auto& [endpoints, stats] : network.edges) {
        ClassEdgeSummary& summary =
            partition.cross_edges[{classes.at(endpoints.first), classes.at(endpoints.second)}];
        ++summary.edge_pairs;
        summary.txn_count += stats.txn_count;
        summary.total_drops += stats.total_drops;
    }
    return partition;
}

enum class GraphFormat { dot, json };

namespace detail {

inline std::string_view class_fill_color(NodeClass c) {
    switch (c) {
        case NodeClass::in: return "#74add1";
        case NodeClass::out: return "#d73027";
        case NodeClass::body: return "#66bd63";
        case NodeClass::dormant: return "#bdbdbd";
    }
    return "#bdbdbd";
}

inline std::string dot_quote(const std::string& id) {
    std::string quoted = "\"";
    for (const char c : id) {
        if (c == '"' || c == '\\') quoted += '\\';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

}  // namespace detail

/// Deterministic graph export: nodes sorted lexicographically, edges by
/// (source, destination). Every node carries its class and flow index.
inline std::string export_graph(const ThresholdNetwork& network,
                                std::span<const FlowTableRow> table, GraphFormat format,
                                double cutoff = 0.5) {
    std::unordered_map<std::string_view, const FlowTableRow*> by_account;
    by_account.reserve(table.size());
    for (const FlowTableRow& row : table) by_account.emplace(row.account, &row);
    const auto row_for = [&](const std::string& node) -> const FlowTableRow& {
        const auto it = by_account.find(node);
        if (it == by_account.end())
            throw DomainError("export_graph: node missing from flow table: " + node);
        return *it->second;
    };

    if (format == GraphFormat::json) {
        nlohmann::ordered_json doc;
        doc["threshold_drops"] = network.threshold_drops;
        doc["nodes"] = nlohmann::ordered_json::array();
        for (const std::string& node : network.nodes) {
            const FlowTableRow& row = row_for(node);
            doc["nodes"].push_back({{"id", node},
                                    {"class", to_string(classify_node(row.index, cutoff))},
                                    {"a_in", row.index.a_in},
                                    {"a_out", row.index.a_out}});
        }
        doc["edges"] = nlohmann::ordered_json::array();
        for (const auto& [endpoints, stats] : network.edges) {
            doc["edges"].push_back({{"src", endpoints.first},
                                    {"dst", endpoints.second},
                                    {"total_drops", stats.total_drops},
                                    {"txn_count", stats.txn_count}});
        }
        return doc.dump(2) + "\n";
    }

    std::string out = "digraph transactions {\n";
    out += "  node [shape=ellipse, style=filled];\n";
    char attrs[160];
    for (const std::string& node : network.nodes) {
        const FlowTableRow& row = row_for(node);
        const NodeClass c = classify_node(row.index, cutoff);
        std::snprintf(attrs, sizeof(attrs),
                      "[class=\"%.*s\", fillcolor=\"%.*s\", a_in=%.12g, a_out=%.12g]",
                      static_cast<int>(to_string(c).size()), to_string(c).data(),
                      static_cast<int>(detail::class_fill_color(c).size()),
                      detail::class_fill_color(c).data(), row.index.a_in, row.index.a_out);
        out += "  " + detail::dot_quote(node) + " " + attrs + ";\n";
    }
    for (const auto& [endpoints, stats] : network.edges) {
        std::snprintf(attrs, sizeof(attrs), "[total_drops=%lld, txn_count=%llu]",
                      static_cast<long long>(stats.total_drops),
                      static_cast<unsigned long long>(stats.txn_count));
        out += "  " + detail::dot_quote(endpoints.first) + " -> " +
               detail::dot_quote(endpoints.second) + " " + attrs + ";\n";
    }
    out += "}\n";
    return out;
}

inline void write_partition_summary_csv(std::ostream& out, const WalnutPartition& partition) {
    out << "class,n_nodes\n";
    for (const NodeClass c :
         {NodeClass::in, NodeClass::out, NodeClass::body, NodeClass::dormant})
        out << to_string(c) << ',' << partition.set_for(c).size() << '\n';
    if (!out) throw IoError("failed to write partition summary CSV");
}

inline void write_class_edges_csv(std::ostream& out, const WalnutPartition& partition) {
    out << "src_class,dst_class,edge_pairs,txn_count,total_drops\n";
    for (const auto& [classes, summary] : partition.cross_edges) {
        out << to_string(classes.first) << ',' << to_string(classes.second) << ','
            << summary.edge_pairs << ',' << summary.txn_count << ',' << summary.total_drops
            << '\n';
    }
    if (!out) throw IoError("failed to write class edge CSV");
}

}  // namespace ledgerflow
