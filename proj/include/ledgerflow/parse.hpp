#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ledgerflow/errors.hpp"
#include "ledgerflow/record.hpp"
#include "ledgerflow/time.hpp"

namespace ledgerflow {

enum class LedgerFormat { csv, jsonl };

inline constexpr std::string_view kCsvHeader =
    "timestamp,source,destination,src_currency,dst_currency,amount_drops,delivered_drops";

struct MalformedLine {
    std::size_t line_number = 0;
    std::string reason;
};

namespace detail {

inline bool parse_drops_field(std::string_view field, std::int64_t& out, std::string& error) {
    if (field.empty()) {
        error = "empty amount field";
        return false;
    }
    if (field.front() == '-') {
        error = "negative amount";
        return false;
    }
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        error = "amount is not a non-negative integer number of drops";
        return false;
    }
    return true;
}

inline bool parse_record_fields(std::string_view ts, std::string_view src, std::string_view dst,
                                std::string_view src_cur, std::string_view dst_cur,
                                std::int64_t amount_drops, std::int64_t delivered_drops,
                                TransactionRecord& out, std::string& error) {
    const auto parsed_ts = parse_timestamp(ts);
    if (!parsed_ts) {
        error = "bad timestamp (expected YYYY-MM-DDThh:mm:ssZ)";
        return false;
    }
    if (!is_valid_account_id(src) || !is_valid_account_id(dst)) {
        error = "account id must be a non-empty token without whitespace";
        return false;
    }
    if (!is_valid_currency_code(src_cur) || !is_valid_currency_code(dst_cur)) {
        error = "currency code must be 3-4 letters";
        return false;
    }
    out.timestamp = *parsed_ts;
    out.source.assign(src);
    out.destination.assign(dst);
    out.source_currency.assign(src_cur);
    out.destination_currency.assign(dst_cur);
    out.amount_drops = amount_drops;
    out.delivered_drops = delivered_drops;
    return true;
}

}  // namespace detail

// One CSV record line (no quoting; account ids carry no commas or spaces).
inline bool parse_record_csv(std::string_view line, TransactionRecord& out, std::string& error) {
    std::string_view fields[7];
    std::size_t n_fields = 0;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (n_fields == 7) {
            error = "expected 7 fields";
            return false;
        }
        fields[n_fields++] =
            line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                               : comma - start);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (n_fields != 7) {
        error = "expected 7 fields";
        return false;
    }
    std::int64_t amount_drops = 0;
    std::int64_t delivered_drops = 0;
    if (!detail::parse_drops_field(fields[5], amount_drops, error)) return false;
    if (!detail::parse_drops_field(fields[6], delivered_drops, error)) return false;
    return detail::parse_record_fields(fields[0], fields[1], fields[2], fields[3], fields[4],
                                       amount_drops, delivered_drops, out, error);
}

inline bool parse_record_jsonl(std::string_view line, TransactionRecord& out, std::string& error) {
    const nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        error = "not a JSON object";
        return false;
    }
    const char* string_keys[] = {"timestamp", "source", "destination", "src_currency",
                                 "dst_currency"};
    for (const char* key : string_keys) {
        if (!doc.contains(key) || !doc[key].is_string()) {
            error = std::string("missing or non-string field: ") + key;
            return false;
        }
    }
    for (const char* key : {"amount_drops", "delivered_drops"}) {
        if (!doc.contains(key) || !doc[key].is_number_integer()) {
            error = std::string("missing or non-integer field: ") + key;
            return false;
        }
        if (doc[key].get<std::int64_t>() < 0) {
            error = "negative amount";
            return false;
        }
    }
    return detail::parse_record_fields(
        doc["timestamp"].get_ref<const std::string&>(), doc["source"].get_ref<const std::string&>(),
        doc["destination"].get_ref<const std::string&>(),
        doc["src_currency"].get_ref<const std::string&>(),
        doc["dst_currency"].get_ref<const std::string&>(), doc["amount_drops"].get<std::int64_t>(),
        doc["delivered_drops"].get<std::int64_t>(), out, error);
}

/// Streams line-delimited records. Well-formed lines reach `on_record`,
/// anything else reaches `on_malformed` with its 1-based line number; a bad
/// line never aborts the stream. Blank lines and the canonical CSV header are
/// skipped without counting.
template <typename OnRecord, typename OnMalformed>
void parse_ledger(std::istream& in, LedgerFormat format, OnRecord&& on_record,
                  OnMalformed&& on_malformed) {
    std::string line;
    std::size_t line_number = 0;
    TransactionRecord record;
    std::string error;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (view.empty()) continue;
        if (format == LedgerFormat::csv && line_number == 1 && view == kCsvHeader) continue;
        const bool ok = format == LedgerFormat::csv ? parse_record_csv(view, record, error)
                                                    : parse_record_jsonl(view, record, error);
        if (ok)
            on_record(record);
        else
            on_malformed(MalformedLine{line_number, error});
    }
    if (in.bad()) throw IoError("ledger stream failed mid-read");
}

struct ParsedLedger {
    std::vector<TransactionRecord> records;
    std::vector<MalformedLine> notices;
};

inline ParsedLedger parse_ledger_stream(std::istream& in, LedgerFormat format) {
    ParsedLedger result;
    parse_ledger(
        in, format, [&](const TransactionRecord& r) { result.records.push_back(r); },
        [&](const MalformedLine& m) { result.notices.push_back(m); });
    return result;
}

inline ParsedLedger parse_ledger_file(const std::string& path, LedgerFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ledger file: " + path);
    return parse_ledger_stream(in, format);
}

inline void append_record_csv(std::string& out, const TransactionRecord& r) {
    out += format_timestamp(r.timestamp);
    out += ',';
    out += r.source;
    out += ',';
    out += r.destination;
    out += ',';
    out += r.source_currency;
    out += ',';
    out += r.destination_currency;
    out += ',';
    out += std::to_string(r.amount_drops);
    out += ',';
    out += std::to_string(r.delivered_drops);
    out += '\n';
}

inline std::string to_csv_line(const TransactionRecord& r) {
    std::string line;
    append_record_csv(line, r);
    line.pop_back();
    return line;
}

inline std::string to_jsonl_line(const TransactionRecord& r) {
    nlohmann::ordered_json doc{{"timestamp", format_timestamp(r.timestamp)},
                               {"source", r.source},
                               {"destination", r.destination},
                               {"src_currency", r.source_currency},
                               {"dst_currency", r.destination_currency},
                               {"amount_drops", r.amount_drops},
                               {"delivered_drops", r.delivered_drops}};
    return doc.dump();
}

inline void write_ledger_csv(std::ostream& out, std::span<const TransactionRecord> records) {
    out << kCsvHeader << '\n';
    std::string buf;
    for (const TransactionRecord& r : records) {
        buf.clear();
        append_record_csv(buf, r);
        out << buf;
    }
    if (!out) throw IoError("failed to write ledger CSV");
}

}  // namespace ledgerflow
