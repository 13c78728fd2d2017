#include "mimo/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace mimo {

namespace {

SinrSample limit_sample(double linear, const UserGainProfile& profile) {
    SinrSample s;
    s.linear = linear;
    s.db = 10.0 * std::log10(linear);
    s.receiver_kind = ReceiverKind::mf;
    s.kappa = profile.kappa;
    s.antennas = 0; // limit value, no finite size
    s.users_per_cell = 0;
    s.cells = profile.cells();
    return s;
}

void check_profile(const UserGainProfile& profile) {
    if (!(profile.beta_own > 0.0)) {
        throw std::domain_error("asymptotic SINR undefined for beta_own <= 0");
    }
}

} // namespace

UserGainProfile profile_from_gains(const GainTensor& gains, double alpha, double rho_r,
                                   int kappa) {
    UserGainProfile p;
    p.beta_own = gains.at(0, 0, 0);
    for (std::size_t j = 1; j < gains.cells; ++j) {
        p.beta_pilot_interferers.push_back(gains.at(0, j, 0));
    }
    p.mean_beta = gains.mean_beta;
    p.alpha = alpha;
    p.rho_r = rho_r;
    p.kappa = kappa;
    return p;
}

SinrSample asymptotic_sinr(const UserGainProfile& profile) {
    check_profile(profile);
    double sum = 0.0, sum_sq = 0.0;
    for (double b : profile.beta_pilot_interferers) {
        sum += b;
        sum_sq += b * b;
    }
    const double a = profile.kappa * sum / profile.beta_own;
    const double p = profile.kappa * sum_sq / profile.beta_own;
    const double num = profile.rho_r * profile.beta_own / (1.0 + a);
    const double den =
        1.0 + profile.rho_r * (p / (1.0 + a) +
                               double(profile.cells()) * profile.alpha * profile.mean_beta);
    return limit_sample(num / den, profile);
}

SinrSample tse_hanly_sinr(const UserGainProfile& profile) {
    if (profile.kappa != 0) {
        throw std::invalid_argument("tse_hanly_sinr requires kappa = 0");
    }
    check_profile(profile);
    const double num = profile.rho_r * profile.beta_own;
    const double den = 1.0 + profile.rho_r * double(profile.cells()) * profile.alpha *
                                 profile.mean_beta;
    return limit_sample(num / den, profile);
}

std::optional<SinrSample> marzetta_limit(const UserGainProfile& profile) {
    if (profile.kappa != 1) {
        throw std::invalid_argument("marzetta_limit requires kappa = 1");
    }
    check_profile(profile);
    double sum_sq = 0.0;
    for (double b : profile.beta_pilot_interferers) {
        sum_sq += b * b;
    }
    if (sum_sq <= 0.0) {
        return std::nullopt; // no pilot interference: SINR grows without bound
    }
    return limit_sample(profile.beta_own * profile.beta_own / sum_sq, profile);
}

const char* scenario_label_name(ScenarioLabel label) {
    switch (label) {
    case ScenarioLabel::favorable:
        return "favorable";
    case ScenarioLabel::intermediate:
        return "intermediate";
    case ScenarioLabel::worst_case:
        return "worst_case";
    }
    return "intermediate";
}

ScenarioClass classify_scenario(const UserGainProfile& profile) {
    check_profile(profile);
    ScenarioClass c;
    for (double b : profile.beta_pilot_interferers) {
        c.ratio_sum += b / profile.beta_own;
        c.ratio_sumsq += b * b / profile.beta_own;
    }
    const double worst_threshold = 0.5 * double(profile.cells() - 1);
    if (c.ratio_sum < 0.1) {
        c.label = ScenarioLabel::favorable;
    } else if (c.ratio_sum > worst_threshold) {
        c.label = ScenarioLabel::worst_case;
    } else {
        c.label = ScenarioLabel::intermediate;
    }
    return c;
}

} // namespace mimo
