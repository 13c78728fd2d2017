#include "mimo/asymptotics.hpp"

#include <doctest.h>

#include <cmath>

using namespace mimo;

namespace {

UserGainProfile equal_profile(std::size_t cells, double alpha, double rho, int kappa) {
    UserGainProfile p;
    p.beta_own = 1.0;
    p.beta_pilot_interferers.assign(cells - 1, 1.0);
    p.mean_beta = 1.0;
    p.alpha = alpha;
    p.rho_r = rho;
    p.kappa = kappa;
    return p;
}

UserGainProfile random_profile(Substream& s) {
    UserGainProfile p;
    p.beta_own = 0.05 + s.next_unit();
    for (int j = 0; j < 6; ++j) {
        p.beta_pilot_interferers.push_back(0.01 * s.next_unit());
    }
    p.mean_beta = 0.05 + s.next_unit();
    p.alpha = s.next_unit();
    p.rho_r = 1.0 + 200.0 * s.next_unit();
    return p;
}

} // namespace

TEST_CASE("asymptotic sinr: hand anchors") {
    CHECK(asymptotic_sinr(equal_profile(7, 0.0, 100.0, 0)).linear == 100.0);
    CHECK(asymptotic_sinr(equal_profile(7, 0.0, 100.0, 1)).linear ==
          doctest::Approx(0.16474).epsilon(1e-4));
    CHECK(asymptotic_sinr(equal_profile(7, 0.0, 100.0, 1)).db ==
          doctest::Approx(-7.83).epsilon(0.002));
    CHECK(asymptotic_sinr(equal_profile(7, 1.0, 100.0, 1)).linear ==
          doctest::Approx(0.018159).epsilon(1e-4));
    CHECK(asymptotic_sinr(equal_profile(7, 1.0, 100.0, 1)).db ==
          doctest::Approx(-17.41).epsilon(0.001));
}

TEST_CASE("asymptotic sinr rejects beta_own = 0") {
    UserGainProfile p = equal_profile(7, 0.5, 10.0, 1);
    p.beta_own = 0.0;
    CHECK_THROWS_AS(asymptotic_sinr(p), std::domain_error);
    CHECK_THROWS_AS(classify_scenario(p), std::domain_error);
}

TEST_CASE("tse-hanly reduction: hand anchors and identity with kappa = 0") {
    CHECK(tse_hanly_sinr(equal_profile(7, 1.0, 100.0, 0)).linear ==
          doctest::Approx(100.0 / 701.0).epsilon(1e-12));
    CHECK(tse_hanly_sinr(equal_profile(7, 1.0, 100.0, 0)).db ==
          doctest::Approx(-8.46).epsilon(0.001));
    CHECK(tse_hanly_sinr(equal_profile(7, 0.0, 100.0, 0)).linear == 100.0);
    CHECK_THROWS_AS(tse_hanly_sinr(equal_profile(7, 1.0, 100.0, 1)), std::invalid_argument);

    Substream s(1, StreamDomain::channel);
    for (int i = 0; i < 200; ++i) {
        UserGainProfile p = random_profile(s);
        p.kappa = 0;
        const double a = asymptotic_sinr(p).linear;
        const double b = tse_hanly_sinr(p).linear;
        CHECK(std::abs(a - b) <= 1e-12 * b);
    }
}

TEST_CASE("marzetta limit: anchors, unbounded case and saturation") {
    CHECK(marzetta_limit(equal_profile(7, 0.0, 1.0, 1))->linear ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(marzetta_limit(equal_profile(7, 0.0, 1.0, 1))->db ==
          doctest::Approx(-7.78).epsilon(0.001));

    UserGainProfile single = equal_profile(2, 0.0, 1.0, 1);
    single.beta_pilot_interferers = {0.1};
    CHECK(marzetta_limit(single)->linear == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(marzetta_limit(single)->db == doctest::Approx(20.0).epsilon(1e-9));

    UserGainProfile clean = equal_profile(7, 0.0, 1.0, 1);
    clean.beta_pilot_interferers.assign(6, 0.0);
    CHECK(!marzetta_limit(clean).has_value());

    CHECK_THROWS_AS(marzetta_limit(equal_profile(7, 0.0, 1.0, 0)), std::invalid_argument);

    // finite-SNR curve stays below the limit and converges to it
    const double limit_db = marzetta_limit(equal_profile(7, 0.0, 1.0, 1))->db;
    double prev = -1e9;
    for (double rho : {1.0, 10.0, 100.0, 1e4, 1e6}) {
        const double db = asymptotic_sinr(equal_profile(7, 0.0, rho, 1)).db;
        CHECK(db <= limit_db + 1e-9);
        CHECK(db >= prev);
        prev = db;
    }
    CHECK(std::abs(asymptotic_sinr(equal_profile(7, 0.0, 1e6, 1)).db - limit_db) < 0.1);
}

TEST_CASE("asymptotic sinr is monotone in alpha, beta_own and interferer gains") {
    Substream s(2, StreamDomain::channel);
    for (int i = 0; i < 100; ++i) {
        UserGainProfile p = random_profile(s);
        p.kappa = 1;

        UserGainProfile worse_alpha = p;
        worse_alpha.alpha = p.alpha + 0.1;
        CHECK(asymptotic_sinr(worse_alpha).linear < asymptotic_sinr(p).linear);

        UserGainProfile stronger_own = p;
        stronger_own.beta_own = p.beta_own * 1.5;
        CHECK(asymptotic_sinr(stronger_own).linear > asymptotic_sinr(p).linear);

        UserGainProfile stronger_interferer = p;
        stronger_interferer.beta_pilot_interferers[i % 6] += 0.5;
        CHECK(asymptotic_sinr(stronger_interferer).linear <=
              asymptotic_sinr(p).linear * (1 + 1e-12));
    }
}

TEST_CASE("contamination never helps the limit") {
    Substream s(3, StreamDomain::channel);
    for (int i = 0; i < 100; ++i) {
        UserGainProfile p1 = random_profile(s);
        p1.beta_pilot_interferers[0] += 0.01; // ensure a nonzero interferer
        p1.kappa = 1;
        UserGainProfile p0 = p1;
        p0.kappa = 0;
        CHECK(asymptotic_sinr(p1).linear < asymptotic_sinr(p0).linear);
    }
    UserGainProfile clean = equal_profile(7, 0.3, 50.0, 1);
    clean.beta_pilot_interferers.assign(6, 0.0);
    UserGainProfile clean0 = clean;
    clean0.kappa = 0;
    CHECK(asymptotic_sinr(clean).linear == asymptotic_sinr(clean0).linear);
}

TEST_CASE("scenario classification") {
    UserGainProfile none = equal_profile(7, 0.0, 1.0, 1);
    none.beta_pilot_interferers.assign(6, 0.0);
    const ScenarioClass c0 = classify_scenario(none);
    CHECK(c0.ratio_sum == 0.0);
    CHECK(c0.label == ScenarioLabel::favorable);

    const ScenarioClass c1 = classify_scenario(equal_profile(7, 0.0, 1.0, 1));
    CHECK(c1.ratio_sum == doctest::Approx(6.0));
    CHECK(c1.label == ScenarioLabel::worst_case);

    UserGainProfile mid = equal_profile(7, 0.0, 1.0, 1);
    mid.beta_pilot_interferers.assign(6, 0.1);
    CHECK(classify_scenario(mid).label == ScenarioLabel::intermediate);
}

TEST_CASE("favorable profiles: contaminated limit approximates tse-hanly") {
    Substream s(4, StreamDomain::channel);
    for (int i = 0; i < 100; ++i) {
        UserGainProfile p = random_profile(s);
        // force ratio_sum < 0.01
        for (double& b : p.beta_pilot_interferers) {
            b = 0.001 * p.beta_own * s.next_unit();
        }
        p.kappa = 1;
        REQUIRE(classify_scenario(p).ratio_sum < 0.01);
        UserGainProfile p0 = p;
        p0.kappa = 0;
        const double gap_db = tse_hanly_sinr(p0).db - asymptotic_sinr(p).db;
        CHECK(gap_db >= -1e-9);
        CHECK(gap_db < 0.5);
    }
}

TEST_CASE("profile extraction from a gain tensor") {
    GainTensor gains = make_equal_gains(7, 3);
    gains.at(0, 0, 0) = 2.0;
    gains.at(0, 4, 0) = 0.5;
    gains.mean_beta = 0.9;
    const UserGainProfile p = profile_from_gains(gains, 0.25, 31.0, 1);
    CHECK(p.beta_own == 2.0);
    REQUIRE(p.beta_pilot_interferers.size() == 6);
    CHECK(p.beta_pilot_interferers[3] == 0.5);
    CHECK(p.beta_pilot_interferers[0] == 1.0);
    CHECK(p.mean_beta == 0.9);
    CHECK(p.alpha == 0.25);
    CHECK(p.cells() == 7);
}
