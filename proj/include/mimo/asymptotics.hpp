#pragma once
// Closed-form large-system SINR (M, K -> infinity with K/M fixed) for the
// matched filter with a pilot-contaminated estimate, plus its special-case
// reductions and the favorable/worst-case scenario classifier.

#include "mimo/geometry.hpp"
#include "mimo/receivers.hpp"

#include <optional>
#include <vector>

namespace mimo {

struct UserGainProfile {
    double beta_own = 1.0;                      // beta_11
    std::vector<double> beta_pilot_interferers; // beta_j1, j = 2..B
    double mean_beta = 1.0;                     // E[beta]
    double alpha = 0.0;                         // K / M
    double rho_r = 1.0;                         // linear SNR
    int kappa = 1;

    std::size_t cells() const { return beta_pilot_interferers.size() + 1; }
};

// Profile of user 1 at base 1 for a given gain tensor.
UserGainProfile profile_from_gains(const GainTensor& gains, double alpha, double rho_r,
                                   int kappa);

// The large-system limit:
//   with A = kappa * sum_j beta_j1 / beta_11 and
//        P = kappa * sum_j beta_j1^2 / beta_11,
//   SINR* = [rho * beta_11 / (1 + A)] /
//           [1 + rho * (P / (1 + A) + B * alpha * E[beta])].
SinrSample asymptotic_sinr(const UserGainProfile& profile);

// Perfect-estimate reduction (kappa = 0):
//   SINR* = rho * beta_11 / (1 + rho * B * alpha * E[beta]).
SinrSample tse_hanly_sinr(const UserGainProfile& profile);

// Infinite-antenna, infinite-SNR limit (kappa = 1, alpha = 0):
//   beta_11^2 / sum_j beta_j1^2. Unbounded (nullopt) with no interferers.
std::optional<SinrSample> marzetta_limit(const UserGainProfile& profile);

enum class ScenarioLabel { favorable, intermediate, worst_case };

const char* scenario_label_name(ScenarioLabel label);

struct ScenarioClass {
    double ratio_sum = 0.0;   // sum_j beta_j1 / beta_11
    double ratio_sumsq = 0.0; // sum_j beta_j1^2 / beta_11
    ScenarioLabel label = ScenarioLabel::favorable;
};

// favorable if ratio_sum < 0.1, worst_case if ratio_sum > 0.5 * (B - 1).
ScenarioClass classify_scenario(const UserGainProfile& profile);

} // namespace mimo
