#include "mimo/receivers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mimo {

const char* receiver_name(ReceiverKind k) {
    switch (k) {
    case ReceiverKind::mf:
        return "mf";
    case ReceiverKind::mmse:
        return "mmse";
    case ReceiverKind::lms:
        return "lms";
    }
    return "mf";
}

SinrSample make_sinr_sample(double linear, ReceiverKind kind, int kappa,
                            const ChannelSet& sets) {
    SinrSample s;
    s.linear = linear;
    s.db = 10.0 * std::log10(linear);
    s.receiver_kind = kind;
    s.kappa = kappa;
    s.antennas = sets.antennas();
    s.users_per_cell = sets.users_per_cell;
    s.cells = sets.cells;
    return s;
}

SinrSample filter_sinr(const CVec& c, const ChannelSet& sets, double rho_r,
                       ReceiverKind kind, int kappa) {
    const std::size_t m = sets.antennas();
    if (c.size() != m) throw std::invalid_argument("filter_sinr: filter length != antennas");
    const double c_norm_sq = c.norm_sq();
    if (!(c_norm_sq > 0.0)) throw std::invalid_argument("filter_sinr: zero filter");

    double interference = 0.0;
    double signal = 0.0;
    for (std::size_t i = 0; i < sets.g.cols; ++i) {
        const std::complex<double> d =
            simd::dot_conj(m, c.re.data(), c.im.data(), sets.g.col_re(i), sets.g.col_im(i));
        const double p = std::norm(d);
        if (i == 0) {
            signal = p;
        } else {
            interference += p;
        }
    }
    const double sinr =
        rho_r * signal / (double(m) * c_norm_sq + rho_r * interference);
    return make_sinr_sample(sinr, kind, kappa, sets);
}

SinrSample matched_filter_sinr(const CVec& estimate, const ChannelSet& sets, double rho_r,
                               int kappa) {
    return filter_sinr(estimate, sets, rho_r, ReceiverKind::mf, kappa);
}

namespace {

// Lower triangle of rho/M * sum over selected columns of g_i g_i^H, plus I.
CMat build_covariance(const ChannelSet& sets, double rho_r, bool include_user1) {
    const std::size_t m = sets.antennas();
    CMat a(m, m);
    const double w = rho_r / double(m);
    for (std::size_t i = include_user1 ? 0 : 1; i < sets.g.cols; ++i) {
        const double* gr = sets.g.col_re(i);
        const double* gi = sets.g.col_im(i);
        for (std::size_t c = 0; c < m; ++c) {
            // column c of A accumulates g * (w * conj(g[c])), rows c..M-1
            const std::complex<double> s(w * gr[c], -w * gi[c]);
            simd::axpy(m - c, s, gr + c, gi + c, a.col_re(c) + c, a.col_im(c) + c);
        }
    }
    for (std::size_t c = 0; c < m; ++c) {
        a.re[c * m + c] += 1.0;
    }
    return a;
}

} // namespace

CVec mmse_filter(const ChannelSet& sets, double rho_r) {
    if (sets.g.cols == 0) throw std::invalid_argument("mmse_filter: empty channel set");
    const std::size_t m = sets.antennas();
    CMat a = build_covariance(sets, rho_r, true);
    cholesky_in_place(a);
    CVec c = sets.g.col_copy(0);
    simd::scale_real(m, std::sqrt(rho_r / double(m)), c.re.data(), c.im.data());
    cholesky_solve(a, c);
    return c;
}

SinrSample mmse_sinr(const ChannelSet& sets, double rho_r) {
    if (sets.g.cols == 0) throw std::invalid_argument("mmse_sinr: empty channel set");
    const std::size_t m = sets.antennas();
    CMat a = build_covariance(sets, rho_r, false);
    cholesky_in_place(a);
    CVec x = sets.g.col_copy(0);
    cholesky_solve(a, x);
    const std::complex<double> q = simd::dot_conj(m, sets.g.col_re(0), sets.g.col_im(0),
                                                  x.re.data(), x.im.data());
    const double sinr = rho_r / double(m) * q.real();
    return make_sinr_sample(sinr, ReceiverKind::mmse, 0, sets);
}

LmsSchedule default_lms_schedule(const SystemConfig& config, std::size_t training_steps) {
    LmsSchedule s;
    const double load = config.rho_r_linear() * double(config.total_users()) /
                        double(config.antennas);
    s.mu0 = 0.05 / (load + 1.0);
    s.decay_tau = double(training_steps) / 10.0;
    return s;
}

void lms_step(LmsState& state, const CVec& y, std::complex<double> psi, double mu) {
    const std::size_t m = state.c.size();
    if (y.size() != m) throw std::invalid_argument("lms_step: length mismatch");
    const std::complex<double> out =
        simd::dot_conj(m, state.c.re.data(), state.c.im.data(), y.re.data(), y.im.data());
    const std::complex<double> err = psi - out;
    simd::axpy(m, mu * std::conj(err), y.re.data(), y.im.data(), state.c.re.data(),
               state.c.im.data());
    ++state.t;
    constexpr double divergence_norm_sq = 1e12; // ||c|| > 1e6
    if (!(state.c.norm_sq() < divergence_norm_sq)) {
        std::ostringstream msg;
        msg << "lms diverged at step " << state.t << " (mu0=" << state.mu0 << ")";
        throw std::runtime_error(msg.str());
    }
}

CMat make_training_symbols(std::size_t total_users, std::size_t steps, Substream& rng) {
    CMat psi(total_users, steps);
    for (std::size_t i = 0; i < total_users * steps; ++i) {
        rng.next_qpsk(psi.re[i], psi.im[i]);
    }
    return psi;
}

LmsState lms_train(const ChannelSet& sets, double rho_r, const CMat& training,
                   const LmsSchedule& schedule, Substream& noise_rng, LmsTrace* trace) {
    const std::size_t n_users = sets.g.cols;
    const std::size_t steps = training.cols;
    if (training.rows != n_users) {
        throw std::invalid_argument("lms_train: one training row per user required");
    }
    if (steps < 1) throw std::invalid_argument("lms_train: at least one training step required");

    LmsState state;
    state.c = CVec(sets.antennas());
    state.mu0 = schedule.mu0;
    state.decay_tau = schedule.decay_tau;

    CVec q(n_users);
    for (std::size_t t = 1; t <= steps; ++t) {
        for (std::size_t u = 0; u < n_users; ++u) {
            q.re[u] = training.re[(t - 1) * n_users + u];
            q.im[u] = training.im[(t - 1) * n_users + u];
        }
        const CVec y = assemble_received(sets, q, rho_r, noise_rng);
        const std::complex<double> psi = q.at(0);
        const double mu = state.step_size_at(t);

        if (trace != nullptr) {
            const std::complex<double> out = simd::dot_conj(
                y.size(), state.c.re.data(), state.c.im.data(), y.re.data(), y.im.data());
            trace->squared_error.push_back(std::norm(psi - out));
        }
        lms_step(state, y, psi, mu);
        if (trace != nullptr && t % 100 == 0) {
            trace->sinr_db.emplace_back(
                t, filter_sinr(state.c, sets, rho_r, ReceiverKind::lms).db);
        }
    }
    return state;
}

} // namespace mimo
