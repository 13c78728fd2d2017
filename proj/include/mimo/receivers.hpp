#pragma once
// Finite-size linear receivers for user 1 of cell 1: matched filter on a
// (possibly contaminated) estimate, exact MMSE, and LMS-trained adaptive.

#include "mimo/channel.hpp"
#include "mimo/cmat.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace mimo {

enum class ReceiverKind { mf, mmse, lms };

const char* receiver_name(ReceiverKind k);

struct SinrSample {
    double linear = 0.0;
    double db = 0.0; // 10*log10(linear)
    ReceiverKind receiver_kind = ReceiverKind::mf;
    int kappa = 0;
    std::size_t antennas = 0, users_per_cell = 0, cells = 0;
};

SinrSample make_sinr_sample(double linear, ReceiverKind kind, int kappa,
                            const ChannelSet& sets);

// SINR of an arbitrary receive filter c:
//   rho * |c^H g_11|^2 / (M * ||c||^2 + rho * sum_{i != 11} |c^H g_i|^2).
// Scale-invariant in c.
SinrSample filter_sinr(const CVec& c, const ChannelSet& sets, double rho_r,
                       ReceiverKind kind = ReceiverKind::mf, int kappa = 0);

// Matched filter on the user-1 estimate; equals filter_sinr with c = ghat.
SinrSample matched_filter_sinr(const CVec& estimate, const ChannelSet& sets, double rho_r,
                               int kappa);

// MMSE filter c = (rho/M * sum_i g_i g_i^H + I)^-1 * sqrt(rho/M) * g_11,
// via Hermitian positive-definite solve.
CVec mmse_filter(const ChannelSet& sets, double rho_r);

// SINR of the MMSE receiver:
//   rho/M * g_11^H (rho/M * sum_{i != 11} g_i g_i^H + I)^-1 g_11.
SinrSample mmse_sinr(const ChannelSet& sets, double rho_r);

struct LmsSchedule {
    double mu0 = 0.0;
    double decay_tau = 1.0;
};

// Defaults when the config leaves the schedule open.
LmsSchedule default_lms_schedule(const SystemConfig& config, std::size_t training_steps);

struct LmsState {
    CVec c;
    double mu0 = 0.0;
    double decay_tau = 1.0;
    std::size_t t = 0;

    double step_size_at(std::size_t step) const {
        return mu0 / (1.0 + double(step) / decay_tau);
    }
};

struct LmsTrace {
    std::vector<double> squared_error;                      // per step
    std::vector<std::pair<std::size_t, double>> sinr_db;    // every 100 steps
};

// One stochastic-gradient step: c += mu * conj(psi - c^H y) * y.
void lms_step(LmsState& state, const CVec& y, std::complex<double> psi, double mu);

// T columns of i.i.d. unit-power QPSK training symbols, one row per user.
CMat make_training_symbols(std::size_t total_users, std::size_t steps, Substream& rng);

// Runs `steps` LMS iterations from c = 0; every user transmits its training
// column, a fresh received vector is assembled per step.
LmsState lms_train(const ChannelSet& sets, double rho_r, const CMat& training,
                   const LmsSchedule& schedule, Substream& noise_rng,
                   LmsTrace* trace = nullptr);

} // namespace mimo
