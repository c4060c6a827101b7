#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "ledgerflow/flow_index.hpp"
#include "ledgerflow/parse.hpp"
#include "ledgerflow/synth.hpp"

using namespace ledgerflow;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LEDGERFLOW_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("ledgerflow_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str(const char* leaf = nullptr) const {
        return leaf ? (path / leaf).string() : path.string();
    }
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

nlohmann::json read_json(const fs::path& path) { return nlohmann::json::parse(read_file(path)); }

// Ten records, three of them XRP-XRP and clean.
const char* kMixedFixture =
    "timestamp,source,destination,src_currency,dst_currency,amount_drops,delivered_drops\n"
    "2018-01-01T00:00:01Z,a,b,XRP,XRP,1000000,1000000\n"
    "2018-01-01T00:00:02Z,a,c,USD,USD,1000000,1000000\n"
    "2018-01-01T00:00:03Z,b,c,XRP,XRP,2000000,2000000\n"
    "2018-01-01T00:00:04Z,c,d,CNY,CNY,1000000,1000000\n"
    "2018-01-01T00:00:05Z,d,e,XRP,USD,1000000,1000000\n"
    "2018-01-02T00:00:06Z,e,f,XRP,XRP,3000000,3000000\n"
    "2018-01-02T00:00:07Z,f,g,XRP,XRP,4000000,3999999\n"
    "2018-01-02T00:00:08Z,g,h,EUR,EUR,1000000,1000000\n"
    "2018-01-02T00:00:09Z,h,i,BTC,BTC,1000000,1000000\n"
    "2018-01-02T00:00:10Z,i,j,XRP,XRP,5000000,4000000\n";

}  // namespace

TEST_CASE("ingest filters the mixed fixture", "[cli]") {
    TempDir dir;
    write_file(dir.path / "input.csv", kMixedFixture);
    REQUIRE(run_cli("ingest --input " + dir.str("input.csv") + " --out-dir " + dir.str()) == 0);

    const auto report = read_json(dir.path / "filter_report.json");
    REQUIRE(report["input_count"] == 10);
    REQUIRE(report["kept_count"] == 3);
    REQUIRE(report["dropped_non_xrp"] == 5);
    REQUIRE(report["dropped_partial"] == 2);
    REQUIRE(report["malformed_count"] == 0);

    const auto filtered = parse_ledger_file(dir.str("filtered.csv"), LedgerFormat::csv);
    REQUIRE(filtered.records.size() == 3);
    for (const auto& r : filtered.records) {
        REQUIRE(r.source_currency == "XRP");
        REQUIRE(r.amount_drops == r.delivered_drops);
    }

    const auto manifest = read_json(dir.path / "ingest_manifest.json");
    REQUIRE(manifest["command"] == "ingest");
    REQUIRE(manifest["outputs"].size() == 3);
    for (const auto& output : manifest["outputs"])
        REQUIRE(fs::exists(output.get<std::string>()));
}

TEST_CASE("ingest of an empty file reports all zeros", "[cli]") {
    TempDir dir;
    write_file(dir.path / "empty.csv", "");
    REQUIRE(run_cli("ingest --input " + dir.str("empty.csv") + " --out-dir " + dir.str()) == 0);
    const auto report = read_json(dir.path / "filter_report.json");
    REQUIRE(report["input_count"] == 0);
    REQUIRE(report["kept_count"] == 0);
    REQUIRE(report["malformed_count"] == 0);
}

TEST_CASE("missing input exits with the io code", "[cli]") {
    TempDir dir;
    REQUIRE(run_cli("ingest --input " + dir.str("nope.csv") + " --out-dir " + dir.str()) == 2);
    REQUIRE(run_cli("analyze --which ccdf --input " + dir.str("nope.csv") + " --out-dir " +
                    dir.str()) == 2);
}

TEST_CASE("jsonl ingest matches the declared format", "[cli]") {
    TempDir dir;
    std::string jsonl;
    TransactionRecord r;
    r.timestamp = *parse_timestamp("2018-01-01T10:00:00Z");
    r.source = "a";
    r.destination = "b";
    r.amount_drops = r.delivered_drops = 5'000'000;
    jsonl += to_jsonl_line(r) + "\n";
    write_file(dir.path / "input.jsonl", jsonl);
    REQUIRE(run_cli("ingest --input " + dir.str("input.jsonl") + " --format jsonl --out-dir " +
                    dir.str()) == 0);
    const auto report = read_json(dir.path / "filter_report.json");
    REQUIRE(report["kept_count"] == 1);
}

TEST_CASE("analyze pareto recovers the synthetic tail in the sidecar", "[cli]") {
    TempDir dir;
    SynthConfig config;
    config.seed = 11;
    config.n_days = 60;
    config.n_accounts = 300;
    config.mean_daily_txns = 400.0;
    config.pareto_alpha = 1.0;
    {
        std::ofstream out(dir.path / "ledger.csv");
        write_ledger_csv(out, gen_ledger(config));
    }
    REQUIRE(run_cli("analyze --which pareto --input " + dir.str("ledger.csv") +
                    " --xmin-xrp 2e7 --out-dir " + dir.str()) == 0);
    const auto sidecar = read_json(dir.path / "pareto.json");
    const double alpha = sidecar["hill"]["alpha"].get<double>();
    REQUIRE(alpha > 0.9);
    REQUIRE(alpha < 1.1);
    REQUIRE(sidecar["n_tail"].get<std::size_t>() > 1000);
}

TEST_CASE("analyze dft finds the weekly period on a dipped ledger", "[cli]") {
    TempDir dir;
    SynthConfig config;
    config.seed = 7;
    config.n_days = 364;
    config.n_accounts = 200;
    config.mean_daily_txns = 120.0;
    config.daily_noise_sigma = 0.3;
    config.weekend_dip = 0.3;
    {
        std::ofstream out(dir.path / "ledger.csv");
        write_ledger_csv(out, gen_ledger(config));
    }
    REQUIRE(run_cli("analyze --which dft --input " + dir.str("ledger.csv") + " --out-dir " +
                    dir.str()) == 0);
    const auto sidecar = read_json(dir.path / "dft.json");
    REQUIRE(sidecar["peak_period_days"].get<double>() == Catch::Approx(7.0).margin(0.15));
    REQUIRE(sidecar["weekly_peak_score"].get<double>() > 3.0);
}

TEST_CASE("analyze daily on an empty ledger is a domain error", "[cli]") {
    TempDir dir;
    write_file(dir.path / "empty.csv", std::string(kCsvHeader) + "\n");
    REQUIRE(run_cli("analyze --which daily --input " + dir.str("empty.csv") + " --out-dir " +
                    dir.str()) == 3);
}

TEST_CASE("unknown analysis exits with the config code", "[cli]") {
    TempDir dir;
    write_file(dir.path / "empty.csv", std::string(kCsvHeader) + "\n");
    REQUIRE(run_cli("analyze --which wavelets --input " + dir.str("empty.csv") + " --out-dir " +
                    dir.str()) == 4);
}

TEST_CASE("flowindex classifies the single-transfer fixture", "[cli]") {
    TempDir dir;
    write_file(dir.path / "one.csv",
               std::string(kCsvHeader) + "\n" +
                   "2018-01-01T00:00:01Z,alpha,beta,XRP,XRP,1000000,1000000\n");
    REQUIRE(run_cli("flowindex --input " + dir.str("one.csv") + " --out-dir " + dir.str()) == 0);
    std::ifstream in(dir.path / "flow_index.csv");
    const auto rows = read_flow_table_csv(in);
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].account == "alpha");
    REQUIRE(rows[0].node_class == NodeClass::in);  // outflow only: a source
    REQUIRE(rows[1].account == "beta");
    REQUIRE(rows[1].node_class == NodeClass::out);
}

TEST_CASE("flowindex finds the injected pair archetype", "[cli]") {
    TempDir dir;
    SynthConfig config;
    config.seed = 5;
    config.n_days = 60;
    config.n_accounts = 60;
    config.mean_daily_txns = 10.0;
    config.archetypes.pair_nodes = 1;
    {
        std::ofstream out(dir.path / "ledger.csv");
        write_ledger_csv(out, gen_ledger(config));
    }
    REQUIRE(run_cli("flowindex --input " + dir.str("ledger.csv") + " --out-dir " + dir.str()) ==
            0);
    std::ifstream in(dir.path / "flow_index.csv");
    const auto rows = read_flow_table_csv(in);
    bool found = false;
    for (const auto& row : rows) {
        if (row.account != "pairrcv000000") continue;
        found = true;
        REQUIRE(row.node_class == NodeClass::out);
        REQUIRE(row.index.a_out < 1e-8);
    }
    REQUIRE(found);
}

TEST_CASE("flowindex of an empty ledger writes just the header", "[cli]") {
    TempDir dir;
    write_file(dir.path / "empty.csv", std::string(kCsvHeader) + "\n");
    REQUIRE(run_cli("flowindex --input " + dir.str("empty.csv") + " --out-dir " + dir.str()) ==
            0);
    REQUIRE(read_file(dir.path / "flow_index.csv") == std::string(kFlowTableHeader) + "\n");
}

TEST_CASE("network summary counts are monotone across thresholds", "[cli]") {
    TempDir dir;
    SynthConfig config;
    config.seed = 13;
    config.n_days = 90;
    config.n_accounts = 120;
    config.mean_daily_txns = 60.0;
    config.archetypes.pair_nodes = 1;
    config.archetypes.bridge_nodes = 1;
    config.archetypes.even_traders = 2;
    {
        std::ofstream out(dir.path / "ledger.csv");
        write_ledger_csv(out, gen_ledger(config));
    }

    std::vector<std::size_t> node_counts;
    for (const char* threshold : {"1e7", "1e8", "1e9"}) {
        const std::string out_dir = dir.str() + "/t" + threshold;
        REQUIRE(run_cli("network --input " + dir.str("ledger.csv") + " --threshold-xrp " +
                        threshold + " --out-dir " + out_dir) == 0);
        const auto doc = read_json(fs::path(out_dir) / "network.json");
        node_counts.push_back(doc["nodes"].size());
        REQUIRE(fs::exists(fs::path(out_dir) / "network.dot"));
        REQUIRE(fs::exists(fs::path(out_dir) / "partition_summary.csv"));
    }
    REQUIRE(node_counts[0] >= node_counts[1]);
    REQUIRE(node_counts[1] >= node_counts[2]);
}

TEST_CASE("network of the chain fixture partitions one node per class", "[cli]") {
    TempDir dir;
    std::string csv(kCsvHeader);
    csv += "\n";
    for (int d = 1; d <= 4; ++d) {
        const std::string day = "2018-02-0" + std::to_string(d);
        csv += day + "T01:00:00Z,s,c,XRP,XRP,20000000000000,20000000000000\n";
        csv += day + "T02:00:00Z,c,t,XRP,XRP,20000000000000,20000000000000\n";
    }
    write_file(dir.path / "chain.csv", csv);
    REQUIRE(run_cli("network --input " + dir.str("chain.csv") +
                    " --threshold-xrp 1e7 --out-dir " + dir.str()) == 0);
    REQUIRE(read_file(dir.path / "partition_summary.csv") ==
            "class,n_nodes\nin,1\nout,1\nbody,1\ndormant,0\n");
}

TEST_CASE("network with an unreachable threshold writes empty exports", "[cli]") {
    TempDir dir;
    write_file(dir.path / "small.csv",
               std::string(kCsvHeader) + "\n" +
                   "2018-01-01T00:00:01Z,a,b,XRP,XRP,1000000,1000000\n");
    REQUIRE(run_cli("network --input " + dir.str("small.csv") +
                    " --threshold-xrp 1e9 --out-dir " + dir.str()) == 0);
    const auto doc = read_json(dir.path / "network.json");
    REQUIRE(doc["nodes"].empty());
    REQUIRE(doc["edges"].empty());
}

TEST_CASE("network rejects bad flags with the config code", "[cli]") {
    TempDir dir;
    write_file(dir.path / "small.csv", std::string(kCsvHeader) + "\n");
    REQUIRE(run_cli("network --input " + dir.str("small.csv") +
                    " --threshold-xrp -5 --out-dir " + dir.str()) == 4);
    REQUIRE(run_cli("network --input " + dir.str("small.csv") +
                    " --graph-formats gexf --out-dir " + dir.str()) == 4);
}

TEST_CASE("synth is digest-stable and validates its config", "[cli]") {
    TempDir dir;
    const std::string flags = "synth --seed 2718 --n-days 45 --n-accounts 64 "
                              "--mean-daily-txns 12 --pair-nodes 1 --out-dir ";
    REQUIRE(run_cli(flags + dir.str() + "/run1") == 0);
    REQUIRE(run_cli(flags + dir.str() + "/run2") == 0);
    REQUIRE(read_file(dir.path / "run1" / "ledger.csv") ==
            read_file(dir.path / "run2" / "ledger.csv"));
    REQUIRE(read_file(dir.path / "run1" / "synth_config.json") ==
            read_file(dir.path / "run2" / "synth_config.json"));

    REQUIRE(run_cli("synth --n-days 0 --out-dir " + dir.str()) == 4);
}

TEST_CASE("synth can emit jsonl that round-trips through ingest", "[cli]") {
    TempDir dir;
    REQUIRE(run_cli("synth --seed 3 --n-days 35 --n-accounts 40 --mean-daily-txns 8 "
                    "--output-format jsonl --out-dir " + dir.str()) == 0);
    REQUIRE(fs::exists(dir.path / "ledger.jsonl"));
    REQUIRE(run_cli("ingest --input " + dir.str("ledger.jsonl") + " --format jsonl --out-dir " +
                    dir.str()) == 0);
    const auto report = read_json(dir.path / "filter_report.json");
    REQUIRE(report["malformed_count"] == 0);
    REQUIRE(report["kept_count"].get<std::uint64_t>() > 0);
    REQUIRE(report["kept_count"] == report["input_count"]);
}

TEST_CASE("synth config file with flag overrides", "[cli]") {
    TempDir dir;
    write_file(dir.path / "config.json",
               R"({"seed": 5, "n_days": 40, "n_accounts": 32, "mean_daily_txns": 6.0})");
    REQUIRE(run_cli("synth --config " + dir.str("config.json") + " --seed 6 --out-dir " +
                    dir.str()) == 0);
    const auto resolved = read_json(dir.path / "synth_config.json");
    REQUIRE(resolved["seed"] == 6);      // flag wins
    REQUIRE(resolved["n_days"] == 40);   // file value kept
    const auto ledger = parse_ledger_file(dir.str("ledger.csv"), LedgerFormat::csv);
    REQUIRE(!ledger.records.empty());
}

TEST_CASE("out-dir can come from the environment", "[cli]") {
    TempDir dir;
    write_file(dir.path / "in.csv", std::string(kCsvHeader) + "\n");
    const std::string env_dir = dir.str() + "/from_env";
    const std::string cmd = std::string("LEDGERFLOW_OUT_DIR=") + env_dir + " " +
                            LEDGERFLOW_CLI_PATH + " flowindex --input " + dir.str("in.csv") +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    REQUIRE(WEXITSTATUS(status) == 0);
    REQUIRE(fs::exists(fs::path(env_dir) / "flow_index.csv"));
}
