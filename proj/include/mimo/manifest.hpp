#pragma once
// Run manifest written next to every output set. The embedded config echo
// (including the resolved suite block) replays the run bit-identically.

#include "mimo/config.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace mimo {

inline constexpr const char* kToolVersion = "mimo-lsa 0.1.0";

struct RunManifest {
    std::string tool_version = kToolVersion;
    std::uint64_t master_seed = 0;
    std::string started_at;  // ISO 8601 UTC
    std::string finished_at;
    std::string config_echo_json;   // RunConfig echo
    std::string suite_params_json;  // resolved subcommand parameters
    std::vector<std::string> output_files;
    std::vector<std::pair<std::string, double>> metrics; // reported measurements
};

std::string iso8601_utc_now();

void write_manifest(const std::string& path, const RunManifest& manifest);

} // namespace mimo
