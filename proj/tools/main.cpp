// mimo-lsa: uplink SINR under pilot contamination -- asymptotic curves,
// Monte Carlo experiments, convergence and quadratic-form suites, LMS runs.

#include "mimo/asymptotics.hpp"
#include "mimo/channel.hpp"
#include "mimo/config.hpp"
#include "mimo/csv.hpp"
#include "mimo/geometry.hpp"
#include "mimo/kernels.hpp"
#include "mimo/manifest.hpp"
#include "mimo/montecarlo.hpp"
#include "mimo/receivers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace mimo;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> simd;
    std::optional<std::size_t> cells, users, antennas;
    std::optional<double> alpha, rho_db;
    std::optional<int> kappa;
    std::optional<std::string> scenario;
    bool redrop = false;
    bool export_drop = false;
};

// --M and --kappa are claimed by the quadform / asymptotic subcommands.
void add_global_options(CLI::App* cmd, GlobalArgs& args, bool with_m = true,
                        bool with_kappa = true) {
    cmd->add_option("--config", args.config_path, "config JSON (or a previous run manifest)");
    cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed, "master seed (64-bit)");
    cmd->add_option("--workers", args.workers, "worker threads (0 = all cores)");
    cmd->add_option("--simd", args.simd, "kernel backend: auto|scalar|avx2|neon");
    cmd->add_option("--B", args.cells, "number of cells (1 or 7)");
    cmd->add_option("--K", args.users, "users per cell");
    if (with_m) cmd->add_option("--M", args.antennas, "base-station antennas");
    cmd->add_option("--alpha", args.alpha, "loading factor K/M");
    cmd->add_option("--rho-db", args.rho_db, "uplink SNR rho_r in dB (equal_power scenario)");
    if (with_kappa) {
        cmd->add_option("--kappa", args.kappa, "0 = perfect estimate, 1 = pilot contaminated");
    }
    cmd->add_option("--scenario", args.scenario, "equal_power | cost231");
    cmd->add_flag("--redrop", args.redrop, "re-draw the user drop every trial (cost231)");
    cmd->add_flag("--export-drop", args.export_drop, "write the user drop as drop.csv (cost231)");
}

RunConfig resolve_config(const GlobalArgs& args) {
    RunConfig cfg = args.config_path.empty() ? default_config()
                                             : parse_config_file(args.config_path);
    if (args.seed) cfg.system.master_seed = *args.seed;
    if (args.workers) cfg.workers = *args.workers;
    if (args.simd) cfg.simd = *args.simd;
    if (args.cells) cfg.system.cells = *args.cells;
    if (args.antennas) cfg.system.antennas = *args.antennas;
    if (args.rho_db) cfg.system.rho_r_db = *args.rho_db;
    if (args.kappa) cfg.system.kappa = *args.kappa;
    if (args.scenario) {
        if (*args.scenario == "equal_power") {
            cfg.scenario = Scenario::equal_power;
        } else if (*args.scenario == "cost231") {
            cfg.scenario = Scenario::cost231;
        } else {
            throw ConfigError("scenario must be \"equal_power\" or \"cost231\"");
        }
    }
    if (args.redrop) cfg.redrop = true;

    if (cfg.system.antennas < 1) throw ConfigError("M must be >= 1");
    if (args.alpha && args.users) {
        cfg.system.alpha = *args.alpha;
        cfg.system.users_per_cell = *args.users;
    } else if (args.alpha) {
        cfg.system.alpha = *args.alpha;
        cfg.system.users_per_cell =
            std::size_t(std::llround(*args.alpha * double(cfg.system.antennas)));
    } else if (args.users) {
        cfg.system.users_per_cell = *args.users;
        cfg.system.alpha = double(*args.users) / double(cfg.system.antennas);
    } else {
        cfg.system.users_per_cell =
            std::size_t(std::llround(cfg.system.alpha * double(cfg.system.antennas)));
    }
    validate(cfg);
    simd::force_backend(simd::backend_from_name(cfg.simd));
    return cfg;
}

json suite_defaults(const RunConfig& cfg) {
    return cfg.suite_json.empty() ? json::object() : json::parse(cfg.suite_json);
}

// COST231 gains for a given K: frozen drop derived from the master seed.
GainTensor cost231_gains(const RunConfig& cfg, std::size_t users_per_cell) {
    const CellLayout layout = build_hex_layout(cfg.system.cells, cfg.cell_radius_km);
    Substream placement(drop_stream_key(cfg.system.master_seed), StreamDomain::placement);
    const UserDrop drop = drop_users(layout, users_per_cell, cfg.min_distance_km, placement);
    Substream shadow(drop_stream_key(cfg.system.master_seed), StreamDomain::shadowing);
    return compute_gains(layout, drop, cfg.budget, &shadow);
}

GainTensor gains_for(const RunConfig& cfg, std::size_t users_per_cell) {
    return cfg.scenario == Scenario::cost231
               ? cost231_gains(cfg, users_per_cell)
               : make_equal_gains(cfg.system.cells, users_per_cell);
}

std::string out_path(const GlobalArgs& args, const std::string& file) {
    std::filesystem::create_directories(args.out_dir);
    return (std::filesystem::path(args.out_dir) / file).string();
}

RunManifest begin_manifest(const RunConfig& cfg) {
    RunManifest m;
    m.master_seed = cfg.system.master_seed;
    m.started_at = iso8601_utc_now();
    m.config_echo_json = config_echo_json(cfg);
    return m;
}

void maybe_export_drop(const GlobalArgs& args, const RunConfig& cfg, RunManifest& manifest) {
    if (!args.export_drop) return;
    if (cfg.scenario != Scenario::cost231) {
        throw ConfigError("--export-drop requires the cost231 scenario");
    }
    const CellLayout layout = build_hex_layout(cfg.system.cells, cfg.cell_radius_km);
    Substream placement(drop_stream_key(cfg.system.master_seed), StreamDomain::placement);
    const UserDrop drop =
        drop_users(layout, cfg.system.users_per_cell, cfg.min_distance_km, placement);
    write_drop_csv(out_path(args, "drop.csv"), drop);
    manifest.output_files.push_back("drop.csv");
}

void finish_manifest(RunManifest& m, const GlobalArgs& args) {
    m.finished_at = iso8601_utc_now();
    write_manifest(out_path(args, "manifest.json"), m);
}

std::vector<double> parse_grid(const std::string& spec) {
    // "start:end:step" inclusive
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw ConfigError("alpha grid must be start:end:step, e.g. 0:1:0.02");
    }
    const double start = std::stod(spec.substr(0, c1));
    const double end = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (!(step > 0.0) || end < start) throw ConfigError("invalid alpha grid '" + spec + "'");
    std::vector<double> grid;
    for (double a = start; a <= end + 0.5 * step; a += step) {
        grid.push_back(std::min(a, end));
    }
    return grid;
}

std::vector<std::size_t> parse_size_list(const std::string& spec) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        const auto comma = spec.find(',', pos);
        const std::string tok = spec.substr(pos, comma == std::string::npos ? spec.npos
                                                                            : comma - pos);
        out.push_back(std::stoull(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ConfigError("empty size list");
    return out;
}

UserGainProfile scenario_profile(const RunConfig& cfg) {
    const GainTensor gains = gains_for(cfg, cfg.system.users_per_cell);
    return profile_from_gains(gains, cfg.system.alpha, cfg.effective_rho_linear(),
                              cfg.system.kappa);
}

// --- subcommands -----------------------------------------------------------

int run_asymptotic(const GlobalArgs& args, const RunConfig& cfg, std::string grid_spec,
                   std::string kappa_mode) {
    const json defaults = suite_defaults(cfg);
    if (grid_spec.empty()) grid_spec = defaults.value("alpha_grid", "0:1:0.02");
    if (kappa_mode.empty()) kappa_mode = defaults.value("kappa_mode", "both");
    if (kappa_mode != "0" && kappa_mode != "1" && kappa_mode != "both") {
        throw ConfigError("asymptotic --kappa must be 0, 1 or both");
    }

    RunManifest manifest = begin_manifest(cfg);
    const std::vector<double> grid = parse_grid(grid_spec);
    std::vector<int> kappas;
    if (kappa_mode == "both") {
        kappas = {0, 1};
    } else {
        kappas = {kappa_mode == "1" ? 1 : 0};
    }

    UserGainProfile profile = scenario_profile(cfg);
    const ScenarioClass cls = classify_scenario(profile);

    CsvWriter csv(out_path(args, "asymptotic.csv"),
                  {"alpha", "kappa", "sinr_db", "sinr_linear", "label"});
    for (const double alpha : grid) {
        for (const int kappa : kappas) {
            profile.alpha = alpha;
            profile.kappa = kappa;
            const SinrSample s = asymptotic_sinr(profile);
            csv.write_row({fmt_full(alpha), fmt_count(kappa), fmt_db(s.db), fmt_full(s.linear),
                           scenario_label_name(cls.label)});
        }
    }

    json suite;
    suite["subcommand"] = "asymptotic";
    suite["alpha_grid"] = grid_spec;
    suite["kappa_mode"] = kappa_mode;
    manifest.suite_params_json = suite.dump();
    manifest.output_files = {"asymptotic.csv"};
    maybe_export_drop(args, cfg, manifest);
    finish_manifest(manifest, args);
    return 0;
}

void write_samples_csv(CsvWriter& csv, const ExperimentResult& res) {
    for (const auto& [trial, s] : res.samples) {
        csv.write_row({fmt_count(trial), receiver_name(s.receiver_kind), fmt_count(s.kappa),
                       fmt_count(s.antennas), fmt_count(s.users_per_cell), fmt_db(s.db)});
    }
}

TrialRequest request_from_names(const std::string& receivers, const RunConfig& cfg) {
    TrialRequest req;
    std::size_t pos = 0;
    while (pos < receivers.size()) {
        const auto comma = receivers.find(',', pos);
        const std::string name =
            receivers.substr(pos, comma == std::string::npos ? receivers.npos : comma - pos);
        if (name == "mf0") {
            req.mf_kappa0 = true;
        } else if (name == "mf1") {
            req.mf_kappa1 = true;
        } else if (name == "mf") {
            (cfg.system.kappa == 0 ? req.mf_kappa0 : req.mf_kappa1) = true;
        } else if (name == "mmse") {
            req.mmse = true;
        } else if (name == "lms") {
            req.lms = true;
        } else {
            throw ConfigError("unknown receiver '" + name + "' (mf0, mf1, mf, mmse, lms)");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    req.lms_steps = cfg.lms.training_steps;
    if (cfg.lms.mu0 || cfg.lms.decay_tau) {
        LmsSchedule s = default_lms_schedule(cfg.system, req.lms_steps);
        if (cfg.lms.mu0) s.mu0 = *cfg.lms.mu0;
        if (cfg.lms.decay_tau) s.decay_tau = *cfg.lms.decay_tau;
        req.lms_schedule = s;
    }
    return req;
}

int run_montecarlo(const GlobalArgs& args, RunConfig cfg, std::size_t trials,
                   std::string receivers, bool export_channels) {
    const json defaults = suite_defaults(cfg);
    if (trials == 0) trials = defaults.value("trials", 200);
    if (receivers.empty()) receivers = defaults.value("receivers", "mf0,mf1,mmse");
    cfg.system.rho_r_db = cfg.effective_rho_db();

    RunManifest manifest = begin_manifest(cfg);
    const TrialRequest req = request_from_names(receivers, cfg);
    const GainTensor gains = gains_for(cfg, cfg.system.users_per_cell);

    RedropSource redrop;
    const RedropSource* redrop_ptr = nullptr;
    if (cfg.redrop && cfg.scenario == Scenario::cost231) {
        redrop = {build_hex_layout(cfg.system.cells, cfg.cell_radius_km), cfg.budget,
                  cfg.min_distance_km};
        redrop_ptr = &redrop;
    }

    const ExperimentResult res =
        run_experiment(cfg.system, gains, req, trials, cfg.workers, redrop_ptr);

    CsvWriter csv(out_path(args, "samples.csv"),
                  {"trial", "receiver", "kappa", "M", "K", "sinr_db"});
    write_samples_csv(csv, res);

    for (const auto& [key, cdf] : res.cdfs) {
        manifest.metrics.emplace_back("median_" + key + "_db", cdf.median());
    }

    if (export_channels) {
        // trial 0's realization at base 1, for debugging
        const std::uint64_t key = trial_stream_key(cfg.system.master_seed, 0);
        Substream channel(key, StreamDomain::channel);
        std::vector<double> beta(cfg.system.total_users());
        for (std::size_t j = 0; j < gains.cells; ++j) {
            for (std::size_t u = 0; u < gains.users_per_cell; ++u) {
                beta[flat_index(j, u, gains.users_per_cell)] = gains.at(0, j, u);
            }
        }
        CMat h = sample_small_scale(cfg.system.antennas, cfg.system.total_users(), channel);
        const ChannelSet sets =
            compose_channels(std::move(h), cfg.system.cells, cfg.system.users_per_cell, beta);
        write_channels_csv(out_path(args, "channels.csv"), sets.g);
        manifest.output_files.push_back("channels.csv");
    }

    json suite;
    suite["subcommand"] = "montecarlo";
    suite["trials"] = trials;
    suite["receivers"] = receivers;
    manifest.suite_params_json = suite.dump();
    manifest.output_files.insert(manifest.output_files.begin(), "samples.csv");
    maybe_export_drop(args, cfg, manifest);
    finish_manifest(manifest, args);
    return 0;
}

int run_cdf(const GlobalArgs& args, RunConfig cfg, std::size_t trials, std::size_t proxy_m) {
    const json defaults = suite_defaults(cfg);
    if (trials == 0) trials = defaults.value("trials", 500);
    if (proxy_m == 0) proxy_m = defaults.value("proxy_M", 2000);
    cfg.system.rho_r_db = cfg.effective_rho_db();

    RunManifest manifest = begin_manifest(cfg);

    // The five situations of the SINR CDF comparison: the alpha -> 0 limit
    // is realized as K = 1 with many antennas (proxy_m).
    struct Situation {
        std::string name;
        std::size_t antennas, users;
        TrialRequest req;
    };
    TrialRequest mf0_only;
    mf0_only.mf_kappa0 = true;
    TrialRequest mf1_only;
    mf1_only.mf_kappa1 = true;
    TrialRequest mf_both;
    mf_both.mf_kappa0 = mf_both.mf_kappa1 = true;
    TrialRequest mmse_only;
    mmse_only.mmse = true;

    const std::size_t m = cfg.system.antennas;
    const std::size_t k = cfg.system.users_per_cell;
    const std::vector<Situation> situations = {
        {"alpha0_mf_k0", proxy_m, 1, mf0_only},
        {"alpha0_mf_k1", proxy_m, 1, mf1_only},
        {"alpha_mf", m, k, mf_both},
        {"alpha_mmse", m, k, mmse_only},
    };

    CsvWriter samples_csv(out_path(args, "samples.csv"),
                          {"trial", "receiver", "kappa", "M", "K", "sinr_db"});
    CsvWriter cdf_csv(out_path(args, "cdf.csv"),
                      {"situation", "receiver", "kappa", "M", "K", "sinr_db", "cum_prob"});

    for (const Situation& situation : situations) {
        SystemConfig sys = cfg.system;
        sys.antennas = situation.antennas;
        sys.users_per_cell = situation.users;
        sys.alpha = double(situation.users) / double(situation.antennas);
        const GainTensor gains = gains_for(cfg, situation.users);
        const ExperimentResult res =
            run_experiment(sys, gains, situation.req, trials, cfg.workers);
        write_samples_csv(samples_csv, res);
        for (const auto& [key, cdf] : res.cdfs) {
            const auto& sorted = cdf.samples_db();
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                cdf_csv.write_row({situation.name + "_" + key, key.substr(0, key.find('_')),
                                   key == "mf_k1" ? "1" : "0", fmt_count(sys.antennas),
                                   fmt_count(sys.users_per_cell), fmt_db(sorted[i]),
                                   fmt_full(double(i + 1) / double(sorted.size()))});
            }
            manifest.metrics.emplace_back("median_" + situation.name + "_" + key + "_db",
                                          cdf.median());
        }
    }

    // headline gaps
    auto metric = [&](const std::string& name) -> std::optional<double> {
        for (const auto& [k2, v] : manifest.metrics) {
            if (k2 == name) return v;
        }
        return std::nullopt;
    };
    const auto a0k0 = metric("median_alpha0_mf_k0_mf_k0_db");
    const auto a1k0 = metric("median_alpha_mf_mf_k0_db");
    const auto a1k1 = metric("median_alpha_mf_mf_k1_db");
    const auto a1mmse = metric("median_alpha_mmse_mmse_db");
    if (a0k0 && a1k0) manifest.metrics.emplace_back("loading_loss_db", *a0k0 - *a1k0);
    if (a1mmse && a1k1) manifest.metrics.emplace_back("mmse_gain_db", *a1mmse - *a1k1);

    json suite;
    suite["subcommand"] = "cdf";
    suite["trials"] = trials;
    suite["proxy_M"] = proxy_m;
    manifest.suite_params_json = suite.dump();
    manifest.output_files = {"samples.csv", "cdf.csv"};
    maybe_export_drop(args, cfg, manifest);
    finish_manifest(manifest, args);
    return 0;
}

int run_convergence(const GlobalArgs& args, RunConfig cfg, std::string m_grid_spec,
                    std::size_t trials, double alpha) {
    const json defaults = suite_defaults(cfg);
    if (m_grid_spec.empty()) m_grid_spec = defaults.value("M_grid", "50,100,200,400");
    if (trials == 0) trials = defaults.value("trials", 200);
    if (alpha == 0.0) alpha = defaults.value("alpha", cfg.system.alpha);
    cfg.system.rho_r_db = cfg.effective_rho_db();

    RunManifest manifest = begin_manifest(cfg);
    const std::vector<std::size_t> m_grid = parse_size_list(m_grid_spec);
    const auto rows = convergence_suite(
        cfg.system, alpha, m_grid, trials,
        [&](std::size_t users) { return gains_for(cfg, users); }, cfg.workers);

    CsvWriter csv(out_path(args, "convergence.csv"),
                  {"M", "K", "mean_sinr_db", "std_sinr_db", "asymptote_db", "abs_gap_db"});
    for (const ConvergenceRow& row : rows) {
        csv.write_row({fmt_count(row.antennas), fmt_count(row.users), fmt_db(row.mean_sinr_db),
                       fmt_db(row.std_sinr_db), fmt_db(row.asymptote_db),
                       fmt_db(row.abs_gap_db)});
    }

    json suite;
    suite["subcommand"] = "convergence";
    suite["M_grid"] = m_grid_spec;
    suite["trials"] = trials;
    suite["alpha"] = alpha;
    manifest.suite_params_json = suite.dump();
    manifest.output_files = {"convergence.csv"};
    maybe_export_drop(args, cfg, manifest);
    finish_manifest(manifest, args);
    return 0;
}

int run_quadform(const GlobalArgs& args, RunConfig cfg, std::string m_list_spec,
                 std::size_t trials, double alpha) {
    const json defaults = suite_defaults(cfg);
    if (m_list_spec.empty()) m_list_spec = defaults.value("M_list", "200,2000");
    if (trials == 0) trials = defaults.value("trials", 100);
    if (alpha == 0.0) alpha = defaults.value("alpha", 0.1);
    cfg.system.rho_r_db = cfg.effective_rho_db();

    RunManifest manifest = begin_manifest(cfg);
    CsvWriter csv(out_path(args, "quadform.csv"),
                  {"M", "K", "B", "term_id", "empirical", "limit", "residual"});
    for (const std::size_t m : parse_size_list(m_list_spec)) {
        const auto users = std::max<std::size_t>(1, std::size_t(std::llround(alpha * double(m))));
        const GainTensor gains = gains_for(cfg, users);
        const QuadformSuite suite =
            quadform_suite(cfg.system, m, alpha, trials, gains, cfg.workers);
        for (const QuadformReport& rep : suite.reports) {
            csv.write_row({fmt_count(rep.antennas), fmt_count(rep.users), fmt_count(rep.cells),
                           quadform_term_name(rep.term), fmt_full(rep.empirical),
                           fmt_full(rep.limit), fmt_full(rep.residual)});
        }
    }

    json suite;
    suite["subcommand"] = "quadform";
    suite["M_list"] = m_list_spec;
    suite["trials"] = trials;
    suite["alpha"] = alpha;
    manifest.suite_params_json = suite.dump();
    manifest.output_files = {"quadform.csv"};
    maybe_export_drop(args, cfg, manifest);
    finish_manifest(manifest, args);
    return 0;
}

int run_lms(const GlobalArgs& args, RunConfig cfg, std::size_t trials, std::size_t steps) {
    const json defaults = suite_defaults(cfg);
    if (trials == 0) trials = defaults.value("trials", 10);
    if (steps != 0) cfg.lms.training_steps = steps;
    cfg.system.rho_r_db = cfg.effective_rho_db();

    RunManifest manifest = begin_manifest(cfg);
    const GainTensor gains = gains_for(cfg, cfg.system.users_per_cell);
    TrialRequest req = request_from_names("lms,mmse", cfg);

    // learning curve of trial 0 (same streams as run_trial)
    {
        const std::uint64_t key = trial_stream_key(cfg.system.master_seed, 0);
        Substream channel(key, StreamDomain::channel);
        std::vector<double> beta(cfg.system.total_users());
        for (std::size_t j = 0; j < gains.cells; ++j) {
            for (std::size_t u = 0; u < gains.users_per_cell; ++u) {
                beta[flat_index(j, u, gains.users_per_cell)] = gains.at(0, j, u);
            }
        }
        CMat h = sample_small_scale(cfg.system.antennas, cfg.system.total_users(), channel);
        const ChannelSet sets =
            compose_channels(std::move(h), cfg.system.cells, cfg.system.users_per_cell, beta);
        Substream training_rng(key, StreamDomain::training);
        Substream noise_rng(key, StreamDomain::noise);
        const CMat training = make_training_symbols(cfg.system.total_users(),
                                                    cfg.lms.training_steps, training_rng);
        const LmsSchedule schedule =
            req.lms_schedule ? *req.lms_schedule
                             : default_lms_schedule(cfg.system, cfg.lms.training_steps);
        LmsTrace trace;
        const double rho = cfg.system.rho_r_linear();
        lms_train(sets, rho, training, schedule, noise_rng, &trace);

        CsvWriter curve(out_path(args, "learning_curve.csv"),
                        {"t", "squared_error", "sinr_db_every_100_steps"});
        std::size_t checkpoint = 0;
        for (std::size_t t = 1; t <= trace.squared_error.size(); ++t) {
            std::string sinr;
            if (checkpoint < trace.sinr_db.size() && trace.sinr_db[checkpoint].first == t) {
                sinr = fmt_db(trace.sinr_db[checkpoint].second);
                ++checkpoint;
            }
            curve.write_row({fmt_count(t), fmt_full(trace.squared_error[t - 1]), sinr});
        }
    }

    req.lms_steps = cfg.lms.training_steps;
    const ExperimentResult res = run_experiment(cfg.system, gains, req, trials, cfg.workers);
    CsvWriter summary(out_path(args, "lms_summary.csv"),
                      {"trial", "lms_sinr_db", "mmse_sinr_db", "gap_db"});
    std::map<std::uint64_t, std::pair<double, double>> paired;
    for (const auto& [trial, s] : res.samples) {
        if (s.receiver_kind == ReceiverKind::lms) paired[trial].first = s.db;
        if (s.receiver_kind == ReceiverKind::mmse) paired[trial].second = s.db;
    }
    std::size_t within_1db = 0;
    for (const auto& [trial, p] : paired) {
        summary.write_row({fmt_count(trial), fmt_db(p.first), fmt_db(p.second),
                           fmt_db(p.second - p.first)});
        if (p.second - p.first <= 1.0) ++within_1db;
    }
    manifest.metrics.emplace_back("fraction_within_1db_of_mmse",
                                  double(within_1db) / double(paired.size()));

    json suite;
    suite["subcommand"] = "lms";
    suite["trials"] = trials;
    suite["T_train"] = cfg.lms.training_steps;
    manifest.suite_params_json = suite.dump();
    manifest.output_files = {"learning_curve.csv", "lms_summary.csv"};
    maybe_export_drop(args, cfg, manifest);
    finish_manifest(manifest, args);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uplink SINR under pilot contamination: simulation and asymptotics"};
    app.require_subcommand(1);

    GlobalArgs args;

    auto* asym = app.add_subcommand("asymptotic", "sweep the large-system SINR over alpha");
    std::string grid_spec, kappa_mode;
    asym->add_option("--alpha-grid", grid_spec, "start:end:step (default 0:1:0.02)");
    asym->add_option("--kappa,--kappa-grid", kappa_mode, "0 | 1 | both (default both)");
    add_global_options(asym, args, true, false);

    auto* mc = app.add_subcommand("montecarlo", "finite-size SINR samples");
    std::size_t mc_trials = 0;
    std::string mc_receivers;
    bool mc_export_channels = false;
    mc->add_option("--trials", mc_trials, "number of trials");
    mc->add_option("--receivers", mc_receivers, "comma list: mf0,mf1,mf,mmse,lms");
    mc->add_flag("--export-channels", mc_export_channels,
                 "write trial 0's channel matrix as channels.csv");
    add_global_options(mc, args);

    auto* cdf = app.add_subcommand("cdf", "SINR CDFs for the standard five situations");
    std::size_t cdf_trials = 0, cdf_proxy_m = 0;
    cdf->add_option("--trials", cdf_trials, "trials per situation");
    cdf->add_option("--proxy-M", cdf_proxy_m, "antennas for the alpha->0 proxy (default 2000)");
    add_global_options(cdf, args);

    auto* conv = app.add_subcommand("convergence", "finite-M mean SINR vs the asymptote");
    std::string conv_grid;
    std::size_t conv_trials = 0;
    double conv_alpha = 0.0;
    conv->add_option("--M-grid", conv_grid, "comma list of M values");
    conv->add_option("--trials", conv_trials, "trials per grid point");
    conv->add_option("--alpha-fixed", conv_alpha, "loading factor for the sweep");
    add_global_options(conv, args);

    auto* quad = app.add_subcommand("quadform", "quadratic-form convergence checks");
    std::string quad_list;
    std::size_t quad_trials = 0;
    double quad_alpha = 0.0;
    quad->add_option("--M,--M-list", quad_list, "comma list of M values (default 200,2000)");
    quad->add_option("--trials", quad_trials, "trials per M");
    quad->add_option("--alpha-fixed", quad_alpha, "loading factor (default 0.1)");
    add_global_options(quad, args, false, true);

    auto* lms = app.add_subcommand("lms", "adaptive filter training runs");
    std::size_t lms_trials = 0, lms_steps = 0;
    lms->add_option("--trials", lms_trials, "number of trials");
    lms->add_option("--T-train", lms_steps, "training steps");
    add_global_options(lms, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        const RunConfig cfg = resolve_config(args);
        if (asym->parsed()) return run_asymptotic(args, cfg, grid_spec, kappa_mode);
        if (mc->parsed()) {
            return run_montecarlo(args, cfg, mc_trials, mc_receivers, mc_export_channels);
        }
        if (cdf->parsed()) return run_cdf(args, cfg, cdf_trials, cdf_proxy_m);
        if (conv->parsed()) return run_convergence(args, cfg, conv_grid, conv_trials, conv_alpha);
        if (quad->parsed()) return run_quadform(args, cfg, quad_list, quad_trials, quad_alpha);
        if (lms->parsed()) return run_lms(args, cfg, lms_trials, lms_steps);
        std::cerr << "no subcommand selected\n" << app.help();
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
