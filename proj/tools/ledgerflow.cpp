// Command-line front end: ingest/filter raw ledgers, run the distributional
// analyses, compute flow-index tables, build threshold networks, and generate
// synthetic ledgers. Every command writes a manifest next to its outputs.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ledgerflow/amounts.hpp"
#include "ledgerflow/errors.hpp"
#include "ledgerflow/filters.hpp"
#include "ledgerflow/flow_index.hpp"
#include "ledgerflow/manifest.hpp"
#include "ledgerflow/network.hpp"
#include "ledgerflow/parse.hpp"
#include "ledgerflow/stats.hpp"
#include "ledgerflow/summary.hpp"
#include "ledgerflow/synth.hpp"
#include "ledgerflow/version.hpp"

namespace lf = ledgerflow;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitDomain = 3;
constexpr int kExitConfig = 4;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

lf::LedgerFormat format_from_string(const std::string& s) {
    if (s == "csv") return lf::LedgerFormat::csv;
    if (s == "jsonl") return lf::LedgerFormat::jsonl;
    throw lf::ConfigError("unknown input format: " + s);
}

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw lf::IoError("cannot create output directory " + out_dir + ": " + ec.message());
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lf::IoError("cannot write " + path);
    return out;
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& doc) {
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
    if (!out) throw lf::IoError("failed writing " + path);
}

std::vector<lf::TransactionRecord> load_records(const std::string& path, lf::LedgerFormat format) {
    return lf::parse_ledger_file(path, format).records;
}

struct IngestOptions {
    std::vector<std::string> inputs;
    std::string format = "csv";
    std::string out_dir;
};

int cmd_ingest(const IngestOptions& opt) {
    Timer timer;
    const lf::LedgerFormat format = format_from_string(opt.format);
    ensure_out_dir(opt.out_dir);
    const std::string filtered_path = opt.out_dir + "/filtered.csv";
    const std::string report_path = opt.out_dir + "/filter_report.json";
    const std::string summary_path = opt.out_dir + "/yearly_summary.csv";

    lf::FilterReport report;
    lf::YearlySummaryBuilder summary;
    auto filtered = open_output(filtered_path);
    filtered << lf::kCsvHeader << '\n';
    std::string buf;
    for (const std::string& input : opt.inputs) {
        std::ifstream in(input, std::ios::binary);
        if (!in) throw lf::IoError("cannot open input: " + input);
        lf::parse_ledger(
            in, format,
            [&](const lf::TransactionRecord& r) {
                const lf::FilterOutcome outcome = lf::classify_record(r);
                lf::count_outcome(report, outcome);
                if (outcome != lf::FilterOutcome::kept) return;
                summary.add(r);
                buf.clear();
                lf::append_record_csv(buf, r);
                filtered << buf;
            },
            [&](const lf::MalformedLine&) {
                ++report.input_count;
                ++report.malformed_count;
            });
    }
    filtered.close();
    if (!filtered) throw lf::IoError("failed writing " + filtered_path);
    write_json_file(report_path, lf::to_json(report));
    {
        auto out = open_output(summary_path);
        lf::write_yearly_summary_csv(out, summary.build());
    }

    lf::RunManifest manifest;
    manifest.command = "ingest";
    manifest.parameters = {{"format", opt.format}};
    for (const std::string& input : opt.inputs)
        manifest.input_digests.emplace_back(input, lf::fnv1a64_file(input));
    manifest.output_files = {filtered_path, report_path, summary_path};
    manifest.wall_seconds = timer.seconds();
    lf::write_manifest(manifest, opt.out_dir + "/ingest_manifest.json");
    return kExitOk;
}

struct AnalyzeOptions {
    std::string input;
    std::string format = "csv";
    std::string which;
    std::string out_dir;
    double xmin_xrp = 1e7;
};

int cmd_analyze(const AnalyzeOptions& opt) {
    Timer timer;
    ensure_out_dir(opt.out_dir);
    const auto records = load_records(opt.input, format_from_string(opt.format));

    nlohmann::ordered_json sidecar;
    std::vector<std::string> outputs;
    const std::string csv_path = opt.out_dir + "/" + opt.which + ".csv";
    const std::string json_path = opt.out_dir + "/" + opt.which + ".json";

    if (opt.which == "ccdf" || opt.which == "pareto") {
        std::vector<double> amounts;
        amounts.reserve(records.size());
        std::uint64_t zero_amounts = 0;
        for (const auto& r : records) {
            if (r.amount_drops > 0)
                amounts.push_back(lf::xrp_from_drops(r.amount_drops));
            else
                ++zero_amounts;
        }
        if (amounts.empty()) throw lf::DomainError("no positive amounts to analyze");
        if (opt.which == "ccdf") {
            const lf::CcdfCurve curve = lf::empirical_ccdf(amounts);
            auto out = open_output(csv_path);
            lf::write_ccdf_csv(out, curve, "amount_xrp");
            sidecar = {{"n_samples", amounts.size()},
                       {"zero_amount_records", zero_amounts},
                       {"distinct_values", curve.points.size()},
                       {"min_xrp", curve.points.front().value},
                       {"max_xrp", curve.points.back().value}};
        } else {
            const lf::ParetoFit hill =
                lf::pareto_index(amounts, opt.xmin_xrp, lf::ParetoMethod::hill);
            const lf::ParetoFit ols =
                lf::pareto_index(amounts, opt.xmin_xrp, lf::ParetoMethod::loglog_ols);
            std::vector<double> tail;
            for (const double v : amounts)
                if (v > opt.xmin_xrp) tail.push_back(v);
            const lf::CcdfCurve curve = lf::empirical_ccdf(tail);
            auto out = open_output(csv_path);
            lf::write_ccdf_csv(out, curve, "amount_xrp");
            sidecar = {{"xmin_xrp", opt.xmin_xrp},
                       {"n_tail", hill.n_tail},
                       {"hill", {{"alpha", hill.alpha}, {"std_error", hill.std_error}}},
                       {"loglog_ols", {{"alpha", ols.alpha}, {"std_error", ols.std_error}}}};
        }
    } else if (opt.which == "daily" || opt.which == "dft" || opt.which == "herding") {
        const lf::DailySeries series = lf::daily_aggregate(records);
        if (series.empty()) throw lf::DomainError("empty daily series");
        if (opt.which == "daily") {
            auto out = open_output(csv_path);
            lf::write_daily_series_csv(out, series);
            sidecar = {{"n_days", series.size()},
                       {"first_date", lf::format_date(series.front().date)},
                       {"last_date", lf::format_date(series.back().date)}};
        } else if (opt.which == "dft") {
            std::vector<double> counts;
            counts.reserve(series.size());
            for (const auto& day : series) counts.push_back(static_cast<double>(day.txn_count));
            const auto bins = lf::dft_magnitudes(counts);
            auto out = open_output(csv_path);
            lf::write_dft_csv(out, bins);
            double peak_period = 0.0, peak_mag = -1.0;
            for (const auto& b : bins)
                if (b.magnitude > peak_mag) {
                    peak_mag = b.magnitude;
                    peak_period = b.period_days;
                }
            sidecar = {{"n_days", series.size()},
                       {"peak_period_days", peak_period},
                       {"peak_magnitude", peak_mag},
                       {"weekly_peak_score", lf::weekly_peak_score(counts)}};
        } else {
            std::vector<double> users, totals;
            auto out = open_output(csv_path);
            out << "date,n_users,total_xrp\n";
            char line[96];
            for (const auto& day : series) {
                if (day.n_users == 0 || day.total_drops == 0) continue;
                const double u = static_cast<double>(day.n_users);
                const double xrp = lf::xrp_from_drops(day.total_drops);
                users.push_back(u);
                totals.push_back(xrp);
                std::snprintf(line, sizeof(line), "%s,%llu,%.17g\n",
                              lf::format_date(day.date).c_str(),
                              static_cast<unsigned long long>(day.n_users), xrp);
                out << line;
            }
            const lf::PowerLawFit fit = lf::powerlaw_correlation_fit(users, totals);
            sidecar = {{"n_days_used", users.size()},
                       {"exponent", fit.exponent},
                       {"intercept", fit.intercept},
                       {"std_error", fit.std_error},
                       {"per_user_exponent", fit.exponent - 1.0}};
        }
    } else {
        throw lf::ConfigError("unknown analysis: " + opt.which);
    }

    write_json_file(json_path, sidecar);
    outputs = {csv_path, json_path};

    lf::RunManifest manifest;
    manifest.command = "analyze";
    manifest.parameters = {{"which", opt.which}, {"format", opt.format},
                           {"xmin_xrp", opt.xmin_xrp}};
    manifest.input_digests.emplace_back(opt.input, lf::fnv1a64_file(opt.input));
    manifest.output_files = outputs;
    manifest.wall_seconds = timer.seconds();
    lf::write_manifest(manifest, opt.out_dir + "/analyze_" + opt.which + "_manifest.json");
    return kExitOk;
}

struct FlowIndexOptions {
    std::string input;
    std::string format = "csv";
    std::string out_dir;
    int order_n = 20;
    double cutoff = 0.5;
};

int cmd_flowindex(const FlowIndexOptions& opt) {
    Timer timer;
    if (opt.order_n < 2) throw lf::ConfigError("--order-n must be at least 2");
    if (!(opt.cutoff > 0.0)) throw lf::ConfigError("--cutoff must be positive");
    ensure_out_dir(opt.out_dir);
    const auto records = load_records(opt.input, format_from_string(opt.format));
    const auto table = lf::flow_table(records, opt.order_n, opt.cutoff);
    const std::string table_path = opt.out_dir + "/flow_index.csv";
    {
        auto out = open_output(table_path);
        lf::write_flow_table_csv(out, table);
    }
    lf::RunManifest manifest;
    manifest.command = "flowindex";
    manifest.parameters = {{"order_n", opt.order_n}, {"cutoff", opt.cutoff},
                           {"format", opt.format}};
    manifest.input_digests.emplace_back(opt.input, lf::fnv1a64_file(opt.input));
    manifest.output_files = {table_path};
    manifest.wall_seconds = timer.seconds();
    lf::write_manifest(manifest, opt.out_dir + "/flowindex_manifest.json");
    return kExitOk;
}

struct NetworkOptions {
    std::string input;
    std::string format = "csv";
    std::string flow_table_path;  // optional; computed from the input if empty
    std::string out_dir;
    double threshold_xrp = 1e7;
    std::vector<std::string> formats = {"dot", "json"};
    int order_n = 20;
    double cutoff = 0.5;
};

int cmd_network(const NetworkOptions& opt) {
    Timer timer;
    if (!(opt.threshold_xrp > 0.0)) throw lf::ConfigError("--threshold-xrp must be positive");
    if (opt.order_n < 2) throw lf::ConfigError("--order-n must be at least 2");
    if (!(opt.cutoff > 0.0)) throw lf::ConfigError("--cutoff must be positive");
    for (const std::string& f : opt.formats)
        if (f != "dot" && f != "json") throw lf::ConfigError("unknown graph format: " + f);
    ensure_out_dir(opt.out_dir);

    const auto records = load_records(opt.input, format_from_string(opt.format));
    const std::int64_t threshold_drops = lf::drops_from_xrp(opt.threshold_xrp);
    const auto nodes = lf::select_big_nodes(records, threshold_drops);
    const lf::ThresholdNetwork network = lf::induced_network(records, nodes, threshold_drops);

    std::vector<lf::FlowTableRow> table;
    if (opt.flow_table_path.empty()) {
        table = lf::flow_table(records, opt.order_n, opt.cutoff);
    } else {
        std::ifstream in(opt.flow_table_path);
        if (!in) throw lf::IoError("cannot open flow table: " + opt.flow_table_path);
        table = lf::read_flow_table_csv(in);
    }
    const lf::WalnutPartition partition = lf::walnut_decomposition(network, table, opt.cutoff);

    std::vector<std::string> outputs;
    for (const std::string& f : opt.formats) {
        const std::string path = opt.out_dir + "/network." + f;
        auto out = open_output(path);
        out << lf::export_graph(network, table,
                                f == "dot" ? lf::GraphFormat::dot : lf::GraphFormat::json,
                                opt.cutoff);
        if (!out) throw lf::IoError("failed writing " + path);
        outputs.push_back(path);
    }
    const std::string summary_path = opt.out_dir + "/partition_summary.csv";
    {
        auto out = open_output(summary_path);
        lf::write_partition_summary_csv(out, partition);
    }
    const std::string edges_path = opt.out_dir + "/class_edges.csv";
    {
        auto out = open_output(edges_path);
        lf::write_class_edges_csv(out, partition);
    }
    outputs.push_back(summary_path);
    outputs.push_back(edges_path);

    lf::RunManifest manifest;
    manifest.command = "network";
    manifest.parameters = {{"threshold_xrp", opt.threshold_xrp},
                           {"order_n", opt.order_n},
                           {"cutoff", opt.cutoff},
                           {"format", opt.format},
                           {"flow_table", opt.flow_table_path}};
    manifest.input_digests.emplace_back(opt.input, lf::fnv1a64_file(opt.input));
    if (!opt.flow_table_path.empty())
        manifest.input_digests.emplace_back(opt.flow_table_path,
                                            lf::fnv1a64_file(opt.flow_table_path));
    manifest.output_files = outputs;
    manifest.wall_seconds = timer.seconds();
    lf::write_manifest(manifest, opt.out_dir + "/network_manifest.json");
    return kExitOk;
}

struct SynthCliOptions {
    std::string config_path;
    std::string out_dir;
    std::string output_format = "csv";
    lf::SynthConfig config;
    CLI::App* sub = nullptr;
};

int cmd_synth(SynthCliOptions& opt) {
    Timer timer;
    lf::SynthConfig config = opt.config;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw lf::IoError("cannot open config: " + opt.config_path);
        nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
        if (doc.is_discarded()) throw lf::ConfigError("config is not valid JSON");
        config = lf::synth_config_from_json(doc);
        // Explicit CLI flags override the config file.
        for (const auto& [flag, apply] :
             std::vector<std::pair<std::string, std::function<void()>>>{
                 {"--seed", [&] { config.seed = opt.config.seed; }},
                 {"--n-days", [&] { config.n_days = opt.config.n_days; }},
                 {"--n-accounts", [&] { config.n_accounts = opt.config.n_accounts; }},
                 {"--pareto-alpha", [&] { config.pareto_alpha = opt.config.pareto_alpha; }},
                 {"--xmin-drops",
                  [&] { config.amount_xmin_drops = opt.config.amount_xmin_drops; }},
                 {"--weekend-dip", [&] { config.weekend_dip = opt.config.weekend_dip; }},
                 {"--herding-exponent",
                  [&] { config.herding_exponent = opt.config.herding_exponent; }},
                 {"--mean-daily-txns",
                  [&] { config.mean_daily_txns = opt.config.mean_daily_txns; }},
                 {"--pair-nodes",
                  [&] { config.archetypes.pair_nodes = opt.config.archetypes.pair_nodes; }},
                 {"--bridge-nodes",
                  [&] { config.archetypes.bridge_nodes = opt.config.archetypes.bridge_nodes; }},
                 {"--even-traders",
                  [&] { config.archetypes.even_traders = opt.config.archetypes.even_traders; }},
             })
            if (opt.sub->count(flag) > 0) apply();
    }

    const lf::LedgerFormat output_format = format_from_string(opt.output_format);
    ensure_out_dir(opt.out_dir);
    const auto records = lf::gen_ledger(config);
    const std::string ledger_path = opt.out_dir + "/ledger." +
                                    (output_format == lf::LedgerFormat::csv ? "csv" : "jsonl");
    {
        auto out = open_output(ledger_path);
        if (output_format == lf::LedgerFormat::csv) {
            lf::write_ledger_csv(out, records);
        } else {
            for (const auto& r : records) out << lf::to_jsonl_line(r) << '\n';
            if (!out) throw lf::IoError("failed writing " + ledger_path);
        }
    }
    const std::string config_path = opt.out_dir + "/synth_config.json";
    write_json_file(config_path, lf::synth_config_to_json(config));

    lf::RunManifest manifest;
    manifest.command = "synth";
    manifest.parameters = lf::synth_config_to_json(config);
    if (!opt.config_path.empty())
        manifest.input_digests.emplace_back(opt.config_path, lf::fnv1a64_file(opt.config_path));
    manifest.output_files = {ledger_path, config_path};
    manifest.wall_seconds = timer.seconds();
    lf::write_manifest(manifest, opt.out_dir + "/synth_manifest.json");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ledger analytics toolkit: filtering, tail statistics, flow indices, "
                 "threshold networks, and synthetic ledgers"};
    app.set_version_flag("--version", lf::kVersion);
    app.require_subcommand(1);

    const char* env_out = std::getenv("LEDGERFLOW_OUT_DIR");
    const std::string default_out = env_out != nullptr ? env_out : ".";

    IngestOptions ingest;
    ingest.out_dir = default_out;
    CLI::App* ingest_cmd = app.add_subcommand("ingest", "parse, validate, and filter a ledger");
    ingest_cmd->add_option("--input", ingest.inputs, "input ledger file(s)")->required();
    ingest_cmd->add_option("--format", ingest.format, "csv or jsonl");
    ingest_cmd->add_option("--out-dir", ingest.out_dir, "output directory");

    AnalyzeOptions analyze;
    analyze.out_dir = default_out;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "distributional and time-series analyses");
    analyze_cmd->add_option("--input", analyze.input, "canonical filtered CSV")->required();
    analyze_cmd->add_option("--format", analyze.format, "csv or jsonl");
    analyze_cmd->add_option("--which", analyze.which, "ccdf|pareto|daily|dft|herding")
        ->required();
    analyze_cmd->add_option("--xmin-xrp", analyze.xmin_xrp, "tail threshold in XRP");
    analyze_cmd->add_option("--out-dir", analyze.out_dir, "output directory");

    FlowIndexOptions flowindex;
    flowindex.out_dir = default_out;
    CLI::App* flowindex_cmd = app.add_subcommand("flowindex", "per-account flow-index table");
    flowindex_cmd->add_option("--input", flowindex.input, "canonical filtered CSV")->required();
    flowindex_cmd->add_option("--format", flowindex.format, "csv or jsonl");
    flowindex_cmd->add_option("--order-n", flowindex.order_n, "effective-count order");
    flowindex_cmd->add_option("--cutoff", flowindex.cutoff, "classification cutoff");
    flowindex_cmd->add_option("--out-dir", flowindex.out_dir, "output directory");

    NetworkOptions network;
    network.out_dir = default_out;
    CLI::App* network_cmd =
        app.add_subcommand("network", "threshold network, decomposition, and graph exports");
    network_cmd->add_option("--input", network.input, "canonical filtered CSV")->required();
    network_cmd->add_option("--format", network.format, "csv or jsonl");
    network_cmd->add_option("--threshold-xrp", network.threshold_xrp,
                            "node selection threshold in XRP");
    network_cmd->add_option("--flow-table", network.flow_table_path,
                            "flow-index CSV (computed from the input when omitted)");
    network_cmd->add_option("--graph-formats", network.formats, "any of: dot json");
    network_cmd->add_option("--order-n", network.order_n, "effective-count order");
    network_cmd->add_option("--cutoff", network.cutoff, "classification cutoff");
    network_cmd->add_option("--out-dir", network.out_dir, "output directory");

    SynthCliOptions synth;
    synth.out_dir = default_out;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic ledger");
    synth.sub = synth_cmd;
    synth_cmd->add_option("--config", synth.config_path, "JSON config file");
    synth_cmd->add_option("--seed", synth.config.seed, "master seed");
    synth_cmd->add_option("--n-days", synth.config.n_days, "number of days");
    synth_cmd->add_option("--n-accounts", synth.config.n_accounts, "background account pool");
    synth_cmd->add_option("--pareto-alpha", synth.config.pareto_alpha, "amount tail exponent");
    synth_cmd->add_option("--xmin-drops", synth.config.amount_xmin_drops,
                          "minimum background amount in drops");
    synth_cmd->add_option("--weekend-dip", synth.config.weekend_dip,
                          "fractional weekend activity reduction");
    synth_cmd->add_option("--herding-exponent", synth.config.herding_exponent,
                          "users-to-total coupling exponent (0 disables)");
    synth_cmd->add_option("--mean-daily-txns", synth.config.mean_daily_txns,
                          "mean background transactions per day");
    synth_cmd->add_option("--pair-nodes", synth.config.archetypes.pair_nodes,
                          "number of injected pair archetypes");
    synth_cmd->add_option("--bridge-nodes", synth.config.archetypes.bridge_nodes,
                          "number of injected bridge archetypes");
    synth_cmd->add_option("--even-traders", synth.config.archetypes.even_traders,
                          "number of injected even-trader archetypes");
    synth_cmd->add_option("--output-format", synth.output_format, "csv or jsonl");
    synth_cmd->add_option("--out-dir", synth.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (ingest_cmd->parsed()) return cmd_ingest(ingest);
        if (analyze_cmd->parsed()) return cmd_analyze(analyze);
        if (flowindex_cmd->parsed()) return cmd_flowindex(flowindex);
        if (network_cmd->parsed()) return cmd_network(network);
        if (synth_cmd->parsed()) return cmd_synth(synth);
    } catch (const lf::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const lf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const lf::DomainError& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}
