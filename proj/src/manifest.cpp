#include "mimo/manifest.hpp"

#include <json.hpp>

#include <ctime>
#include <fstream>
#include <stdexcept>

namespace mimo {

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::ordered_json doc;
    doc["tool_version"] = manifest.tool_version;
    doc["master_seed"] = manifest.master_seed;
    doc["started_at"] = manifest.started_at;
    doc["finished_at"] = manifest.finished_at;

    nlohmann::ordered_json echo = nlohmann::ordered_json::parse(manifest.config_echo_json);
    if (!manifest.suite_params_json.empty()) {
        echo["suite"] = nlohmann::ordered_json::parse(manifest.suite_params_json);
    }
    doc["config_echo"] = echo;
    doc["output_files"] = manifest.output_files;
    if (!manifest.metrics.empty()) {
        nlohmann::ordered_json metrics;
        for (const auto& [name, value] : manifest.metrics) {
            metrics[name] = value;
        }
        doc["metrics"] = metrics;
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open manifest file '" + path + "'");
    out << doc.dump(2) << '\n';
}

} // namespace mimo
