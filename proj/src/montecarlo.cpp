#include "mimo/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mimo {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples_db) : samples_db_(std::move(samples_db)) {
    if (samples_db_.empty()) throw std::invalid_argument("empirical cdf needs samples");
    std::sort(samples_db_.begin(), samples_db_.end());
}

double EmpiricalCdf::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile argument outside [0,1]");
    const std::size_t n = samples_db_.size();
    if (n == 1) return samples_db_[0];
    const double pos = q * double(n - 1);
    const std::size_t lo = std::size_t(pos);
    if (lo + 1 >= n) return samples_db_[n - 1];
    const double frac = pos - double(lo);
    return samples_db_[lo] * (1.0 - frac) + samples_db_[lo + 1] * frac;
}

std::string sample_key(const SinrSample& s) {
    switch (s.receiver_kind) {
    case ReceiverKind::mf:
        return s.kappa == 0 ? "mf_k0" : "mf_k1";
    case ReceiverKind::mmse:
        return "mmse";
    case ReceiverKind::lms:
        return "lms";
    }
    return "mf";
}

void parallel_for_trials(std::size_t n_trials, std::size_t workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, n_trials > 0 ? n_trials : std::size_t(1));
    if (workers <= 1) {
        for (std::size_t t = 0; t < n_trials; ++t) fn(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= n_trials) return;
                try {
                    fn(t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::vector<double> beta_slice_at_base0(const GainTensor& gains) {
    std::vector<double> beta(gains.cells * gains.users_per_cell);
    for (std::size_t j = 0; j < gains.cells; ++j) {
        for (std::size_t k = 0; k < gains.users_per_cell; ++k) {
            beta[flat_index(j, k, gains.users_per_cell)] = gains.at(0, j, k);
        }
    }
    return beta;
}

GainTensor redraw_gains(const SystemConfig& config, const RedropSource& redrop,
                        std::uint64_t trial_index) {
    const std::uint64_t key = trial_stream_key(config.master_seed, trial_index);
    Substream placement(key, StreamDomain::placement);
    const UserDrop drop =
        drop_users(redrop.layout, config.users_per_cell, redrop.min_distance_km, placement);
    Substream shadow(key, StreamDomain::shadowing);
    return compute_gains(redrop.layout, drop, redrop.budget, &shadow);
}

} // namespace

std::vector<SinrSample> run_trial(const SystemConfig& config, const GainTensor& gains,
                                  std::uint64_t trial_index, const TrialRequest& request) {
    if (gains.cells != config.cells || gains.users_per_cell != config.users_per_cell) {
        throw std::invalid_argument("run_trial: gain tensor does not match config counts");
    }
    const std::uint64_t key = trial_stream_key(config.master_seed, trial_index);
    const double rho = config.rho_r_linear();

    Substream channel(key, StreamDomain::channel);
    CMat h = sample_small_scale(config.antennas, config.total_users(), channel);
    const ChannelSet sets = compose_channels(std::move(h), config.cells, config.users_per_cell,
                                             beta_slice_at_base0(gains));

    std::vector<SinrSample> out;
    if (request.mf_kappa0) {
        const PilotEstimate est = pilot_estimate(sets, 0);
        out.push_back(matched_filter_sinr(est.g_hat.col_copy(0), sets, rho, 0));
    }
    if (request.mf_kappa1) {
        const PilotEstimate est = pilot_estimate(sets, 1);
        out.push_back(matched_filter_sinr(est.g_hat.col_copy(0), sets, rho, 1));
    }
    if (request.mmse) {
        out.push_back(mmse_sinr(sets, rho));
    }
    if (request.lms) {
        Substream training_rng(key, StreamDomain::training);
        Substream noise_rng(key, StreamDomain::noise);
        const CMat training =
            make_training_symbols(config.total_users(), request.lms_steps, training_rng);
        const LmsSchedule schedule = request.lms_schedule
                                         ? *request.lms_schedule
                                         : default_lms_schedule(config, request.lms_steps);
        const LmsState state = lms_train(sets, rho, training, schedule, noise_rng);
        SinrSample s = filter_sinr(state.c, sets, rho, ReceiverKind::lms, config.kappa);
        out.push_back(s);
    }
    return out;
}

ExperimentResult run_experiment(const SystemConfig& config, const GainTensor& gains,
                                const TrialRequest& request, std::size_t n_trials,
                                std::size_t workers, const RedropSource* redrop) {
    if (n_trials < 1) throw std::invalid_argument("run_experiment needs at least one trial");

    std::vector<std::vector<SinrSample>> per_trial(n_trials);
    parallel_for_trials(n_trials, workers, [&](std::size_t t) {
        if (redrop != nullptr) {
            const GainTensor trial_gains = redraw_gains(config, *redrop, t);
            per_trial[t] = run_trial(config, trial_gains, t, request);
        } else {
            per_trial[t] = run_trial(config, gains, t, request);
        }
    });

    ExperimentResult result;
    std::map<std::string, std::vector<double>> by_key;
    for (std::size_t t = 0; t < n_trials; ++t) {
        for (const SinrSample& s : per_trial[t]) {
            result.samples.emplace_back(t, s);
            by_key[sample_key(s)].push_back(s.db);
        }
    }
    for (auto& [k, v] : by_key) {
        result.cdfs.emplace(k, EmpiricalCdf(std::move(v)));
    }
    return result;
}

std::vector<ConvergenceRow> convergence_suite(const SystemConfig& config_template, double alpha,
                                              const std::vector<std::size_t>& m_grid,
                                              std::size_t n_trials, const GainMaker& gains_for,
                                              std::size_t workers) {
    if (!(alpha > 0.0)) throw std::invalid_argument("convergence_suite needs alpha > 0");
    for (std::size_t i = 1; i < m_grid.size(); ++i) {
        if (m_grid[i] <= m_grid[i - 1]) {
            throw std::invalid_argument("convergence_suite: M grid must be ascending");
        }
    }

    std::vector<ConvergenceRow> rows;
    for (const std::size_t m : m_grid) {
        SystemConfig cfg = config_template;
        cfg.antennas = m;
        cfg.alpha = alpha;
        cfg.users_per_cell = std::max<std::size_t>(1, std::size_t(std::llround(alpha * double(m))));
        const GainTensor gains = gains_for(cfg.users_per_cell);

        TrialRequest request;
        (cfg.kappa == 0 ? request.mf_kappa0 : request.mf_kappa1) = true;

        const ExperimentResult res = run_experiment(cfg, gains, request, n_trials, workers);
        std::vector<double> db;
        db.reserve(res.samples.size());
        for (const auto& [t, s] : res.samples) db.push_back(s.db);

        const UserGainProfile profile =
            profile_from_gains(gains, alpha, cfg.rho_r_linear(), cfg.kappa);
        const SinrSample asy = asymptotic_sinr(profile);

        ConvergenceRow row;
        row.antennas = m;
        row.users = cfg.users_per_cell;
        row.mean_sinr_db = mean_of(db);
        row.std_sinr_db = stddev_of(db);
        row.asymptote_db = asy.db;
        row.abs_gap_db = std::abs(row.mean_sinr_db - row.asymptote_db);
        rows.push_back(row);
    }
    return rows;
}

const char* quadform_term_name(QuadformTerm t) {
    switch (t) {
    case QuadformTerm::own_gain:
        return "own_gain";
    case QuadformTerm::noise_energy:
        return "noise_energy";
    case QuadformTerm::interference_sum:
        return "interference_sum";
    case QuadformTerm::pilot_cross_energy:
        return "pilot_cross_energy";
    case QuadformTerm::cross_zero_terms:
        return "cross_zero_terms";
    }
    return "own_gain";
}

QuadformSuite quadform_suite(const SystemConfig& config_template, std::size_t antennas,
                             double alpha, std::size_t n_trials, const GainTensor& gains,
                             std::size_t workers) {
    if (antennas < 50) throw std::invalid_argument("quadform_suite needs M >= 50");
    SystemConfig cfg = config_template;
    cfg.antennas = antennas;
    cfg.alpha = alpha;
    cfg.users_per_cell = std::max<std::size_t>(1, std::size_t(std::llround(alpha * double(antennas))));
    if (gains.cells != cfg.cells || gains.users_per_cell != cfg.users_per_cell) {
        throw std::invalid_argument("quadform_suite: gain tensor does not match K = alpha*M");
    }

    const std::size_t b = cfg.cells;
    const std::size_t k_users = cfg.users_per_cell;
    const std::size_t n_cols = b * k_users;
    const double m = double(antennas);
    const double kappa = double(cfg.kappa);

    const std::vector<double> beta = beta_slice_at_base0(gains);
    const double beta_own = beta[0];
    const double interference_scale = double(b) * alpha * gains.mean_beta;

    // limits
    double pilot_sum = 0.0;
    for (std::size_t u = 1; u < b; ++u) pilot_sum += beta[u * k_users];
    const double limit_own = beta_own;
    const double limit_noise = beta_own + kappa * pilot_sum;
    const double limit_interf = beta_own * interference_scale;
    std::vector<double> limit_pilot(b > 1 ? b - 1 : 0);
    double pilot_limit_sum = 0.0;
    for (std::size_t u = 1; u < b; ++u) {
        const double bj = beta[u * k_users];
        limit_pilot[u - 1] = bj * interference_scale + bj * bj;
        pilot_limit_sum += limit_pilot[u - 1];
    }
    // The cross terms vanish in the limit; their residual is measured
    // against the interference expression they are embedded in.
    const double zero_scale = std::max(limit_interf + pilot_limit_sum, 1e-9);

    QuadformSuite suite;
    suite.antennas = antennas;
    suite.users = k_users;
    suite.cells = b;
    suite.alpha = alpha;
    suite.trials.resize(n_trials);

    parallel_for_trials(n_trials, workers, [&](std::size_t t) {
        const std::uint64_t key = trial_stream_key(cfg.master_seed, t);
        Substream channel(key, StreamDomain::channel);
        CMat h = sample_small_scale(antennas, n_cols, channel);
        const ChannelSet sets = compose_channels(std::move(h), b, k_users, beta);

        // contaminated estimate of user 1
        CVec ghat = sets.g.col_copy(0);
        if (cfg.kappa == 1) {
            for (std::size_t u = 1; u < b; ++u) {
                simd::axpy(antennas, {1.0, 0.0}, sets.g.col_re(u * k_users),
                           sets.g.col_im(u * k_users), ghat.re.data(), ghat.im.data());
            }
        }

        QuadformTrialRow& row = suite.trials[t];

        const std::complex<double> own =
            simd::dot_conj(antennas, ghat.re.data(), ghat.im.data(), sets.g.col_re(0),
                           sets.g.col_im(0)) /
            m;
        row.own_gain = own.real();
        row.residual[0] = std::abs(own.real() - limit_own) / std::max(limit_own, 1e-9);

        row.noise_energy = ghat.norm_sq() / m;
        row.residual[1] = std::abs(row.noise_energy - limit_noise) / std::max(limit_noise, 1e-9);

        // dot table over the pilot-sharing columns {1, K+1, ..., (B-1)K+1}
        std::vector<std::vector<std::complex<double>>> dots(b);
        for (std::size_t s = 0; s < b; ++s) {
            dots[s].resize(n_cols);
            const std::size_t col = s * k_users;
            for (std::size_t i = 0; i < n_cols; ++i) {
                dots[s][i] = sets.g.col_dot_conj(col, sets.g, i);
            }
        }

        double interf = 0.0;
        for (std::size_t i = 1; i < n_cols; ++i) interf += std::norm(dots[0][i]);
        interf /= m * m;
        row.interference_sum = interf;
        row.residual[2] = std::abs(interf - limit_interf) / std::max(limit_interf, 1e-9);

        if (b > 1) {
            double pilot_mean = 0.0, pilot_residual = 0.0;
            for (std::size_t u = 1; u < b; ++u) {
                double e = 0.0;
                for (std::size_t i = 1; i < n_cols; ++i) e += std::norm(dots[u][i]);
                e /= m * m;
                pilot_mean += e;
                pilot_residual += std::abs(e - limit_pilot[u - 1]) / limit_pilot[u - 1];
            }
            row.pilot_cross_mean = pilot_mean / double(b - 1);
            row.residual[3] = pilot_residual / double(b - 1);

            double cross_mean = 0.0;
            std::size_t n_pairs = 0;
            for (std::size_t a = 0; a < b; ++a) {
                for (std::size_t c = a + 1; c < b; ++c) {
                    std::complex<double> acc = 0.0;
                    for (std::size_t i = 1; i < n_cols; ++i) {
                        acc += dots[a][i] * std::conj(dots[c][i]);
                    }
                    cross_mean += std::abs(acc) / (m * m);
                    ++n_pairs;
                }
            }
            row.cross_zero_mean_abs = cross_mean / double(n_pairs);
            row.residual[4] = row.cross_zero_mean_abs / zero_scale;
        }
    });

    auto collect = [&](QuadformTerm term, auto value_of, double limit) {
        std::vector<double> values, residuals;
        values.reserve(n_trials);
        residuals.reserve(n_trials);
        for (const QuadformTrialRow& r : suite.trials) {
            values.push_back(value_of(r));
            residuals.push_back(r.residual[std::size_t(term)]);
        }
        QuadformReport rep;
        rep.antennas = antennas;
        rep.users = k_users;
        rep.cells = b;
        rep.term = term;
        rep.empirical = median_of(values);
        rep.limit = limit;
        rep.residual = median_of(residuals);
        suite.reports.push_back(rep);
    };

    collect(QuadformTerm::own_gain, [](const QuadformTrialRow& r) { return r.own_gain; },
            limit_own);
    collect(QuadformTerm::noise_energy,
            [](const QuadformTrialRow& r) { return r.noise_energy; }, limit_noise);
    collect(QuadformTerm::interference_sum,
            [](const QuadformTrialRow& r) { return r.interference_sum; }, limit_interf);
    if (b > 1) {
        collect(QuadformTerm::pilot_cross_energy,
                [](const QuadformTrialRow& r) { return r.pilot_cross_mean; },
                mean_of(limit_pilot));
        collect(QuadformTerm::cross_zero_terms,
                [](const QuadformTrialRow& r) { return r.cross_zero_mean_abs; }, 0.0);
    }
    return suite;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / double(v.size());
}

double stddev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / double(v.size() - 1));
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace mimo
