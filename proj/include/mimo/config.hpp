#pragma once
// Resolved run configuration: JSON file plus command-line overrides, with
// the validation rules that gate every subcommand.

#include "mimo/channel.hpp"
#include "mimo/geometry.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace mimo {

// Violations are reported with the offending field; the CLI maps this to
// exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scenario { equal_power, cost231 };

const char* scenario_name(Scenario s);

struct LmsConfig {
    std::optional<double> mu0;       // default derived from the load
    std::optional<double> decay_tau; // default T_train / 10
    std::size_t training_steps = 10000;
};

struct RunConfig {
    SystemConfig system;
    Scenario scenario = Scenario::equal_power;
    LinkBudget budget;
    double cell_radius_km = 2.0;
    double min_distance_km = 0.035;
    LmsConfig lms;
    std::size_t workers = 0; // 0 = available parallelism
    std::string simd = "auto";
    bool redrop = false;

    // Raw JSON of the subcommand parameter block, if the config (or a
    // replayed manifest) carries one. Subcommands use it for defaults.
    std::string suite_json;

    // equal_power: rho from rho_r_db; cost231: tx power over noise power.
    double effective_rho_db() const;
    double effective_rho_linear() const;
};

// Parses and validates a config JSON document (text form). Unknown keys are
// rejected, as are violations of the K = round(alpha*M), kappa in {0,1} and
// K <= N_c*T rules.
RunConfig parse_config_text(const std::string& json_text);

RunConfig parse_config_file(const std::string& path);

RunConfig default_config();

// Validation used by both file parsing and flag overrides.
void validate(RunConfig& config);

// Full resolved echo as a JSON document; feeding it back through
// parse_config_text reproduces the same configuration.
std::string config_echo_json(const RunConfig& config);

} // namespace mimo
