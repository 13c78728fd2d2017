#pragma once
// Trial orchestration: randomized experiments, empirical SINR distributions,
// convergence-to-asymptote sweeps and the quadratic-form verification suite.

#include "mimo/asymptotics.hpp"
#include "mimo/channel.hpp"
#include "mimo/geometry.hpp"
#include "mimo/receivers.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mimo {

class EmpiricalCdf {
public:
    EmpiricalCdf() = default;
    explicit EmpiricalCdf(std::vector<double> samples_db);

    std::size_t n() const { return samples_db_.size(); }
    const std::vector<double>& samples_db() const { return samples_db_; }

    // Linear interpolation between order statistics; monotone in q.
    double quantile(double q) const;
    double median() const { return quantile(0.5); }

private:
    std::vector<double> samples_db_; // sorted ascending
};

struct TrialRequest {
    bool mf_kappa0 = false;
    bool mf_kappa1 = false;
    bool mmse = false;
    bool lms = false;
    std::size_t lms_steps = 10000;
    std::optional<LmsSchedule> lms_schedule; // default schedule if unset
};

// "mf_k0", "mf_k1", "mmse", "lms" -- keys of the per-receiver CDF map.
std::string sample_key(const SinrSample& s);

// Evaluates the requested receivers on one shared channel realization.
// The trial's streams derive from (master_seed, trial_index) only, so any
// scheduling of trials over workers reproduces identical samples.
std::vector<SinrSample> run_trial(const SystemConfig& config, const GainTensor& gains,
                                  std::uint64_t trial_index, const TrialRequest& request);

// Re-draws the user drop (and shadowing) per trial when enabled.
struct RedropSource {
    CellLayout layout;
    LinkBudget budget;
    double min_distance_km = 0.035;
};

struct ExperimentResult {
    // trial-major, deterministic order
    std::vector<std::pair<std::uint64_t, SinrSample>> samples;
    std::map<std::string, EmpiricalCdf> cdfs;
};

ExperimentResult run_experiment(const SystemConfig& config, const GainTensor& gains,
                                const TrialRequest& request, std::size_t n_trials,
                                std::size_t workers = 0,
                                const RedropSource* redrop = nullptr);

struct ConvergenceRow {
    std::size_t antennas = 0;   // M
    std::size_t users = 0;      // K = round(alpha * M)
    double mean_sinr_db = 0.0;
    double std_sinr_db = 0.0;
    double asymptote_db = 0.0;
    double abs_gap_db = 0.0;
};

using GainMaker = std::function<GainTensor(std::size_t users_per_cell)>;

std::vector<ConvergenceRow> convergence_suite(const SystemConfig& config_template,
                                              double alpha,
                                              const std::vector<std::size_t>& m_grid,
                                              std::size_t n_trials, const GainMaker& gains_for,
                                              std::size_t workers = 0);

enum class QuadformTerm {
    own_gain,           // ghat^H g_11 / M            -> beta_11
    noise_energy,       // ghat^H ghat / M            -> beta_11 + kappa * sum beta_j1
    interference_sum,   // 1/M^2 sum_{i!=1} |g_1^H g_i|^2      -> beta_11 B alpha E[beta]
    pilot_cross_energy, // 1/M^2 sum_{i!=1} |g_{uK+1}^H g_i|^2 -> beta_j1 B alpha E[beta] + beta_j1^2
    cross_zero_terms,   // 1/M^2 sum_{i!=1} g_a^H g_i g_b^T g_i^* -> 0
};

const char* quadform_term_name(QuadformTerm t);

struct QuadformReport {
    std::size_t antennas = 0, users = 0, cells = 0;
    QuadformTerm term = QuadformTerm::own_gain;
    double empirical = 0.0; // median over trials
    double limit = 0.0;
    double residual = 0.0;  // median over trials of |empirical - limit| / scale
};

// Per-trial values; families with several members (u indices, (a,b) pairs)
// carry the mean over members.
struct QuadformTrialRow {
    double own_gain = 0.0;            // Re(ghat^H g_11 / M)
    double noise_energy = 0.0;
    double interference_sum = 0.0;
    double pilot_cross_mean = 0.0;
    double cross_zero_mean_abs = 0.0;
    double residual[5] = {0, 0, 0, 0, 0}; // indexed like QuadformTerm
};

struct QuadformSuite {
    std::size_t antennas = 0, users = 0, cells = 0;
    double alpha = 0.0;
    std::vector<QuadformTrialRow> trials;
    std::vector<QuadformReport> reports; // one per term family
};

QuadformSuite quadform_suite(const SystemConfig& config_template, std::size_t antennas,
                             double alpha, std::size_t n_trials, const GainTensor& gains,
                             std::size_t workers = 0);

// Shared deterministic worker pool: fn(t) for t in [0, n_trials).
void parallel_for_trials(std::size_t n_trials, std::size_t workers,
                         const std::function<void(std::size_t)>& fn);

double mean_of(const std::vector<double>& v);
double stddev_of(const std::vector<double>& v);
double median_of(std::vector<double> v);

} // namespace mimo
