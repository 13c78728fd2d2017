#include "mimo/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace mimo {

using nlohmann::json;
using nlohmann::ordered_json;

const char* scenario_name(Scenario s) {
    return s == Scenario::equal_power ? "equal_power" : "cost231";
}

double RunConfig::effective_rho_db() const {
    return scenario == Scenario::cost231 ? budget_rho_r_db(budget) : system.rho_r_db;
}

double RunConfig::effective_rho_linear() const {
    return std::pow(10.0, effective_rho_db() / 10.0);
}

RunConfig default_config() {
    return RunConfig{};
}

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw ConfigError(msg);
}

void require_known_keys(const json& obj, std::initializer_list<const char*> known,
                        const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (key == k) {
                ok = true;
                break;
            }
        }
        if (!ok) fail("unknown config key '" + where + key + "'");
    }
}

double get_number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(std::string("config key '") + key + "' must be a number");
    return obj[key].get<double>();
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer() || obj[key].get<long long>() < 0) {
        fail(std::string("config key '") + key + "' must be a non-negative integer");
    }
    return obj[key].get<std::size_t>();
}

} // namespace

RunConfig parse_config_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed config JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("config must be a JSON object");

    // A run manifest can be replayed directly: use its config echo.
    if (doc.contains("config_echo")) {
        doc = doc["config_echo"];
        if (!doc.is_object()) fail("config_echo must be a JSON object");
    }

    require_known_keys(doc,
                       {"B", "K", "M", "alpha", "rho_r_db", "kappa", "seed", "scenario",
                        "link_budget", "coherence", "lms", "workers", "simd", "redrop",
                        "cell_radius_km", "min_distance_km", "suite"},
                       "");

    RunConfig cfg = default_config();
    SystemConfig& sys = cfg.system;

    sys.cells = get_count(doc, "B", sys.cells);
    sys.antennas = get_count(doc, "M", sys.antennas);
    sys.rho_r_db = get_number(doc, "rho_r_db", sys.rho_r_db);

    if (doc.contains("kappa")) {
        if (!doc["kappa"].is_number_integer() ||
            (doc["kappa"].get<long long>() != 0 && doc["kappa"].get<long long>() != 1)) {
            fail("kappa must be 0 or 1");
        }
        sys.kappa = doc["kappa"].get<int>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) fail("seed must be an integer");
        sys.master_seed = doc["seed"].get<std::uint64_t>();
    }

    const bool has_k = doc.contains("K");
    const bool has_alpha = doc.contains("alpha");
    if (sys.antennas < 1) fail("M must be >= 1");
    if (has_k) sys.users_per_cell = get_count(doc, "K", sys.users_per_cell);
    if (has_alpha) {
        sys.alpha = get_number(doc, "alpha", sys.alpha);
        if (!(sys.alpha >= 0.0)) fail("alpha must be >= 0");
    }
    if (has_alpha && has_k) {
        const auto implied = std::size_t(std::llround(sys.alpha * double(sys.antennas)));
        if (implied != sys.users_per_cell) {
            std::ostringstream msg;
            msg << "inconsistent counts: K=" << sys.users_per_cell << " but round(alpha*M)="
                << implied;
            fail(msg.str());
        }
    } else if (has_alpha) {
        sys.users_per_cell = std::size_t(std::llround(sys.alpha * double(sys.antennas)));
    } else {
        sys.alpha = double(sys.users_per_cell) / double(sys.antennas);
    }

    if (doc.contains("scenario")) {
        const std::string s = doc["scenario"].get<std::string>();
        if (s == "equal_power") {
            cfg.scenario = Scenario::equal_power;
        } else if (s == "cost231") {
            cfg.scenario = Scenario::cost231;
        } else {
            fail("scenario must be \"equal_power\" or \"cost231\"");
        }
    }

    if (doc.contains("link_budget")) {
        const json& lb = doc["link_budget"];
        require_known_keys(lb,
                           {"carrier_mhz", "base_height_m", "mobile_height_m", "clutter_db",
                            "tx_power_dbm", "noise_power_dbm", "shadowing_sigma_db"},
                           "link_budget.");
        cfg.budget.carrier_mhz = get_number(lb, "carrier_mhz", cfg.budget.carrier_mhz);
        cfg.budget.base_height_m = get_number(lb, "base_height_m", cfg.budget.base_height_m);
        cfg.budget.mobile_height_m = get_number(lb, "mobile_height_m", cfg.budget.mobile_height_m);
        cfg.budget.clutter_db = get_number(lb, "clutter_db", cfg.budget.clutter_db);
        cfg.budget.tx_power_dbm = get_number(lb, "tx_power_dbm", cfg.budget.tx_power_dbm);
        cfg.budget.noise_power_dbm =
            get_number(lb, "noise_power_dbm", cfg.budget.noise_power_dbm);
        cfg.budget.shadowing_sigma_db =
            get_number(lb, "shadowing_sigma_db", cfg.budget.shadowing_sigma_db);
    }

    if (doc.contains("coherence")) {
        const json& co = doc["coherence"];
        require_known_keys(co, {"T_c", "N_c", "T"}, "coherence.");
        CoherenceBudget budget;
        budget.coherent_symbols = get_count(co, "T_c", 0);
        budget.coherent_subcarriers = get_count(co, "N_c", 0);
        budget.training_symbols = get_count(co, "T", 0);
        sys.coherence = budget;
    }

    if (doc.contains("lms")) {
        const json& lm = doc["lms"];
        require_known_keys(lm, {"mu0", "decay_tau", "T_train"}, "lms.");
        if (lm.contains("mu0")) cfg.lms.mu0 = get_number(lm, "mu0", 0.0);
        if (lm.contains("decay_tau")) cfg.lms.decay_tau = get_number(lm, "decay_tau", 0.0);
        cfg.lms.training_steps = get_count(lm, "T_train", cfg.lms.training_steps);
    }

    cfg.workers = get_count(doc, "workers", cfg.workers);
    if (doc.contains("simd")) cfg.simd = doc["simd"].get<std::string>();
    if (doc.contains("redrop")) {
        if (!doc["redrop"].is_boolean()) fail("redrop must be a boolean");
        cfg.redrop = doc["redrop"].get<bool>();
    }
    cfg.cell_radius_km = get_number(doc, "cell_radius_km", cfg.cell_radius_km);
    cfg.min_distance_km = get_number(doc, "min_distance_km", cfg.min_distance_km);
    if (doc.contains("suite")) {
        if (!doc["suite"].is_object()) fail("suite must be a JSON object");
        cfg.suite_json = doc["suite"].dump();
    }

    validate(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void validate(RunConfig& cfg) {
    SystemConfig& sys = cfg.system;
    if (sys.cells != 1 && sys.cells != 7) {
        fail("B=" + std::to_string(sys.cells) + " unsupported (supported layouts: B=1, B=7)");
    }
    if (sys.antennas < 1) fail("M must be >= 1");
    if (sys.users_per_cell < 1) {
        fail("K must be >= 1 (got K=" + std::to_string(sys.users_per_cell) + ")");
    }
    if (sys.kappa != 0 && sys.kappa != 1) fail("kappa must be 0 or 1");
    if (!std::isfinite(sys.rho_r_db)) fail("rho_r_db must be finite");
    {
        const auto implied = std::size_t(std::llround(sys.alpha * double(sys.antennas)));
        if (implied != sys.users_per_cell) {
            std::ostringstream msg;
            msg << "inconsistent counts: K=" << sys.users_per_cell << " but round(alpha*M)="
                << implied;
            fail(msg.str());
        }
    }
    if (sys.coherence) {
        const CoherenceBudget& co = *sys.coherence;
        if (co.training_symbols > co.coherent_symbols) {
            std::ostringstream msg;
            msg << "coherence.T=" << co.training_symbols << " exceeds T_c="
                << co.coherent_symbols;
            fail(msg.str());
        }
        const std::size_t learnable = co.coherent_subcarriers * co.training_symbols;
        if (sys.users_per_cell > learnable) {
            std::ostringstream msg;
            msg << "K=" << sys.users_per_cell << " exceeds N_c*T=" << learnable;
            fail(msg.str());
        }
    }
    if (cfg.budget.carrier_mhz < 1500.0 || cfg.budget.carrier_mhz > 2000.0) {
        fail("link_budget.carrier_mhz outside COST231-Hata validity range [1500, 2000]");
    }
    if (!(cfg.budget.base_height_m > 0.0) || !(cfg.budget.mobile_height_m > 0.0)) {
        fail("link_budget antenna heights must be positive");
    }
    if (!std::isfinite(cfg.budget.tx_power_dbm) || !std::isfinite(cfg.budget.noise_power_dbm)) {
        fail("link_budget powers must be finite");
    }
    if (!(cfg.cell_radius_km > 0.0)) fail("cell_radius_km must be positive");
    if (!(cfg.min_distance_km >= 0.0) || cfg.min_distance_km >= cfg.cell_radius_km) {
        fail("min_distance_km must lie in [0, cell_radius_km)");
    }
    if (cfg.lms.training_steps < 1) fail("lms.T_train must be >= 1");
    if (cfg.lms.mu0 && !(*cfg.lms.mu0 >= 0.0)) fail("lms.mu0 must be >= 0");
    if (cfg.lms.decay_tau && !(*cfg.lms.decay_tau > 0.0)) fail("lms.decay_tau must be positive");
    if (cfg.simd != "auto" && cfg.simd != "scalar" && cfg.simd != "avx2" && cfg.simd != "neon") {
        fail("simd must be one of auto, scalar, avx2, neon");
    }
}

std::string config_echo_json(const RunConfig& cfg) {
    ordered_json doc;
    const SystemConfig& sys = cfg.system;
    doc["B"] = sys.cells;
    doc["K"] = sys.users_per_cell;
    doc["M"] = sys.antennas;
    doc["alpha"] = sys.alpha;
    doc["rho_r_db"] = sys.rho_r_db;
    doc["kappa"] = sys.kappa;
    doc["seed"] = sys.master_seed;
    doc["scenario"] = scenario_name(cfg.scenario);
    doc["link_budget"] = {{"carrier_mhz", cfg.budget.carrier_mhz},
                          {"base_height_m", cfg.budget.base_height_m},
                          {"mobile_height_m", cfg.budget.mobile_height_m},
                          {"clutter_db", cfg.budget.clutter_db},
                          {"tx_power_dbm", cfg.budget.tx_power_dbm},
                          {"noise_power_dbm", cfg.budget.noise_power_dbm},
                          {"shadowing_sigma_db", cfg.budget.shadowing_sigma_db}};
    if (sys.coherence) {
        doc["coherence"] = {{"T_c", sys.coherence->coherent_symbols},
                            {"N_c", sys.coherence->coherent_subcarriers},
                            {"T", sys.coherence->training_symbols}};
    }
    ordered_json lms;
    if (cfg.lms.mu0) lms["mu0"] = *cfg.lms.mu0;
    if (cfg.lms.decay_tau) lms["decay_tau"] = *cfg.lms.decay_tau;
    lms["T_train"] = cfg.lms.training_steps;
    doc["lms"] = lms;
    doc["workers"] = cfg.workers;
    doc["simd"] = cfg.simd;
    doc["redrop"] = cfg.redrop;
    doc["cell_radius_km"] = cfg.cell_radius_km;
    doc["min_distance_km"] = cfg.min_distance_km;
    return doc.dump(2);
}

} // namespace mimo
