#include "mimo/montecarlo.hpp"

#include <doctest.h>

#include <cmath>

using namespace mimo;

namespace {

SystemConfig small_config() {
    SystemConfig cfg;
    cfg.cells = 7;
    cfg.users_per_cell = 5;
    cfg.antennas = 20;
    cfg.alpha = 0.25;
    cfg.rho_r_db = 20.0;
    cfg.kappa = 1;
    cfg.master_seed = 99;
    return cfg;
}

} // namespace

TEST_CASE("empirical cdf: quantiles interpolate and stay monotone") {
    const EmpiricalCdf cdf(std::vector<double>{3.0, -1.0, 2.0, 0.5});
    CHECK(cdf.quantile(0.0) == -1.0);
    CHECK(cdf.quantile(1.0) == 3.0);
    CHECK(cdf.median() == doctest::Approx(1.25));
    double prev = cdf.quantile(0.0);
    for (double q = 0.05; q <= 1.0; q += 0.05) {
        const double v = cdf.quantile(q);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(cdf.quantile(1.5), std::invalid_argument);

    const EmpiricalCdf point(std::vector<double>{4.2});
    CHECK(point.quantile(0.0) == 4.2);
    CHECK(point.quantile(0.37) == 4.2);
    CHECK(point.quantile(1.0) == 4.2);
}

TEST_CASE("run_trial replays bit-identically") {
    const SystemConfig cfg = small_config();
    const GainTensor gains = make_equal_gains(7, 5);
    TrialRequest req;
    req.mf_kappa0 = req.mf_kappa1 = req.mmse = true;
    const auto a = run_trial(cfg, gains, 3, req);
    const auto b = run_trial(cfg, gains, 3, req);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].linear == b[i].linear);
    }
}

TEST_CASE("a receiver's sample does not depend on which others were requested") {
    const SystemConfig cfg = small_config();
    const GainTensor gains = make_equal_gains(7, 5);
    TrialRequest only_mf;
    only_mf.mf_kappa1 = true;
    TrialRequest all;
    all.mf_kappa0 = all.mf_kappa1 = all.mmse = true;

    const auto lone = run_trial(cfg, gains, 5, only_mf);
    const auto both = run_trial(cfg, gains, 5, all);
    REQUIRE(lone.size() == 1);
    REQUIRE(both.size() == 3);
    CHECK(lone[0].linear == both[1].linear); // mf kappa=1 is the second entry
}

TEST_CASE("paired ordering: mmse dominates mf on every trial") {
    const SystemConfig cfg = small_config();
    const GainTensor gains = make_equal_gains(7, 5);
    TrialRequest req;
    req.mf_kappa0 = req.mf_kappa1 = req.mmse = true;
    for (std::uint64_t t = 0; t < 30; ++t) {
        const auto samples = run_trial(cfg, gains, t, req);
        REQUIRE(samples.size() == 3);
        const double mf0 = samples[0].linear;
        const double mf1 = samples[1].linear;
        const double mmse = samples[2].linear;
        CHECK(mf0 <= mmse * (1 + 1e-12));
        CHECK(mf1 <= mmse * (1 + 1e-12));
    }
}

TEST_CASE("finite-size samples cluster near the limit (M = K = 50)") {
    SystemConfig cfg;
    cfg.cells = 7;
    cfg.users_per_cell = 50;
    cfg.antennas = 50;
    cfg.alpha = 1.0;
    cfg.rho_r_db = 20.0;
    cfg.kappa = 1;
    cfg.master_seed = 7;
    const GainTensor gains = make_equal_gains(7, 50);
    TrialRequest req;
    req.mf_kappa1 = true;

    const std::size_t trials = 50;
    std::size_t inside = 0;
    const ExperimentResult res = run_experiment(cfg, gains, req, trials, 1);
    for (const auto& [t, s] : res.samples) {
        if (std::abs(s.db - (-17.41)) <= 3.0) ++inside;
    }
    CHECK(double(inside) / double(trials) >= 0.8);
}

TEST_CASE("experiments are bit-identical across 1, 2 and 8 workers") {
    const SystemConfig cfg = small_config();
    const GainTensor gains = make_equal_gains(7, 5);
    TrialRequest req;
    req.mf_kappa0 = req.mf_kappa1 = req.mmse = true;

    const ExperimentResult r1 = run_experiment(cfg, gains, req, 16, 1);
    const ExperimentResult r2 = run_experiment(cfg, gains, req, 16, 2);
    const ExperimentResult r8 = run_experiment(cfg, gains, req, 16, 8);
    REQUIRE(r1.samples.size() == r2.samples.size());
    REQUIRE(r1.samples.size() == r8.samples.size());
    for (std::size_t i = 0; i < r1.samples.size(); ++i) {
        CHECK(r1.samples[i].first == r2.samples[i].first);
        CHECK(r1.samples[i].second.linear == r2.samples[i].second.linear);
        CHECK(r1.samples[i].second.linear == r8.samples[i].second.linear);
    }
}

TEST_CASE("single-trial experiment gives a point-mass cdf") {
    const SystemConfig cfg = small_config();
    const GainTensor gains = make_equal_gains(7, 5);
    TrialRequest req;
    req.mmse = true;
    const ExperimentResult res = run_experiment(cfg, gains, req, 1, 1);
    const EmpiricalCdf& cdf = res.cdfs.at("mmse");
    CHECK(cdf.n() == 1);
    CHECK(cdf.quantile(0.0) == cdf.quantile(1.0));
}

TEST_CASE("sample keys distinguish receiver and kappa") {
    SinrSample s;
    s.receiver_kind = ReceiverKind::mf;
    s.kappa = 0;
    CHECK(sample_key(s) == "mf_k0");
    s.kappa = 1;
    CHECK(sample_key(s) == "mf_k1");
    s.receiver_kind = ReceiverKind::mmse;
    CHECK(sample_key(s) == "mmse");
    s.receiver_kind = ReceiverKind::lms;
    CHECK(sample_key(s) == "lms");
}

TEST_CASE("redrawing the drop changes gains per trial but stays reproducible") {
    SystemConfig cfg = small_config();
    cfg.users_per_cell = 3;
    cfg.alpha = 0.15;
    RedropSource redrop{build_hex_layout(7, 2.0), LinkBudget{}, 0.035};
    cfg.rho_r_db = 197.0;
    TrialRequest req;
    req.mf_kappa1 = true;

    const GainTensor unused = make_equal_gains(7, 3);
    const ExperimentResult a = run_experiment(cfg, unused, req, 6, 2, &redrop);
    const ExperimentResult b = run_experiment(cfg, unused, req, 6, 1, &redrop);
    bool any_differs = false;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].second.linear == b.samples[i].second.linear);
        if (i > 0 && a.samples[i].second.linear != a.samples[0].second.linear) {
            any_differs = true;
        }
    }
    CHECK(any_differs);
}

TEST_CASE("convergence suite tightens toward the asymptote") {
    SystemConfig cfg;
    cfg.cells = 7;
    cfg.rho_r_db = 20.0;
    cfg.kappa = 0;
    cfg.master_seed = 31;
    const auto rows = convergence_suite(
        cfg, 0.2, {25, 100}, 60, [](std::size_t k) { return make_equal_gains(7, k); }, 0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].users == 5);
    CHECK(rows[1].users == 20);

    // kappa = 0 asymptote equals the perfect-estimate reduction
    UserGainProfile p;
    p.beta_own = 1.0;
    p.beta_pilot_interferers.assign(6, 1.0);
    p.mean_beta = 1.0;
    p.alpha = 0.2;
    p.rho_r = 100.0;
    p.kappa = 0;
    CHECK(rows[0].asymptote_db == doctest::Approx(tse_hanly_sinr(p).db).epsilon(1e-12));
    CHECK(rows[1].abs_gap_db < rows[0].abs_gap_db + 0.5); // coarse at this size
    CHECK(rows[1].std_sinr_db < rows[0].std_sinr_db * 1.1);

    CHECK_THROWS_AS(convergence_suite(
                        cfg, 0.2, {100, 50}, 4,
                        [](std::size_t k) { return make_equal_gains(7, k); }, 1),
                    std::invalid_argument);
}

TEST_CASE("quadform suite: exact finite-M mean and limits at M = 100") {
    SystemConfig cfg;
    cfg.cells = 7;
    cfg.kappa = 1;
    cfg.master_seed = 4242;
    const std::size_t m = 100;
    const double alpha = 0.1; // K = 10, BK = 70
    const GainTensor gains = make_equal_gains(7, 10);
    const QuadformSuite suite = quadform_suite(cfg, m, alpha, 200, gains, 0);

    REQUIRE(suite.reports.size() == 5);
    const QuadformReport& interf = suite.reports[2];
    CHECK(interf.term == QuadformTerm::interference_sum);
    CHECK(interf.limit == doctest::Approx(0.7).epsilon(1e-12));

    // exact finite-M expectation (BK - 1) / M = 0.69
    std::vector<double> values;
    for (const auto& t : suite.trials) values.push_back(t.interference_sum);
    CHECK(std::abs(mean_of(values) - 0.69) < 0.02);

    // own-gain term has exact mean beta_11 at finite M
    std::vector<double> own;
    for (const auto& t : suite.trials) own.push_back(t.own_gain);
    const double sem = stddev_of(own) / std::sqrt(double(own.size()));
    CHECK(std::abs(mean_of(own) - 1.0) <= 4.0 * sem);

    const QuadformReport& noise = suite.reports[1];
    CHECK(noise.limit == doctest::Approx(7.0));
    CHECK(noise.empirical == doctest::Approx(7.0).epsilon(0.1));

    CHECK_THROWS_AS(quadform_suite(cfg, 10, alpha, 4, gains, 1), std::invalid_argument);
}

TEST_CASE("quadform residuals shrink with M") {
    SystemConfig cfg;
    cfg.cells = 7;
    cfg.kappa = 1;
    cfg.master_seed = 11;
    const GainTensor g10 = make_equal_gains(7, 10);
    const GainTensor g40 = make_equal_gains(7, 40);
    const QuadformSuite coarse = quadform_suite(cfg, 100, 0.1, 40, g10, 0);
    const QuadformSuite fine = quadform_suite(cfg, 400, 0.1, 40, g40, 0);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(fine.reports[i].residual < coarse.reports[i].residual);
    }
}
