#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ledgerflow/errors.hpp"
#include "ledgerflow/version.hpp"

namespace ledgerflow {

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xCBF29CE484222325ULL) {
    for (const char c : bytes) {
        state ^= static_cast<unsigned char>(c);
        state *= 0x100000001B3ULL;
    }
    return state;
}

inline std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for digest: " + path);
    std::uint64_t state = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        state = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), state);
    return state;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

// Reproducibility sidecar written next to every command's outputs. Wall-clock
// duration is the only field allowed to differ between identical runs.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, std::uint64_t>> input_digests;
    std::vector<std::string> output_files;
    double wall_seconds = 0.0;
};

inline void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["command"] = manifest.command;
    doc["parameters"] = manifest.parameters;
    doc["inputs"] = nlohmann::ordered_json::array();
    for (const auto& [input_path, digest] : manifest.input_digests)
        doc["inputs"].push_back({{"path", input_path}, {"fnv1a64", hex64(digest)}});
    doc["outputs"] = manifest.output_files;
    doc["version"] = kVersion;
    doc["wall_seconds"] = manifest.wall_seconds;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest: " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing manifest: " + path);
}

}  // namespace ledgerflow
