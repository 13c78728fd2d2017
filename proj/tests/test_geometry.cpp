#include "mimo/geometry.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace mimo;

TEST_CASE("hex layout: single cell") {
    const CellLayout layout = build_hex_layout(1, 2.0);
    REQUIRE(layout.cells() == 1);
    CHECK(layout.base_positions[0].x == 0.0);
    CHECK(layout.base_positions[0].y == 0.0);
}

TEST_CASE("hex layout: seven cells at sqrt(3)*R") {
    const CellLayout layout = build_hex_layout(7, 2.0);
    REQUIRE(layout.cells() == 7);
    const double expected = 2.0 * std::numbers::sqrt3; // ~3.4641
    for (std::size_t i = 1; i < 7; ++i) {
        CHECK(distance_km(layout.base_positions[0], layout.base_positions[i]) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
    // outer ring neighbors are equally spaced
    double min_pair = 1e9;
    for (std::size_t i = 1; i < 7; ++i) {
        for (std::size_t j = i + 1; j < 7; ++j) {
            min_pair = std::min(min_pair,
                                distance_km(layout.base_positions[i], layout.base_positions[j]));
        }
    }
    CHECK(min_pair == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("hex layout rejects unsupported cell counts") {
    CHECK_THROWS_WITH_AS(build_hex_layout(3, 2.0),
                         doctest::Contains("supported layouts: B=1, B=7"), std::invalid_argument);
    CHECK_THROWS_AS(build_hex_layout(7, 0.0), std::invalid_argument);
}

TEST_CASE("drop_users is deterministic in the stream") {
    const CellLayout layout = build_hex_layout(1, 2.0);
    Substream s1(99, StreamDomain::placement);
    Substream s2(99, StreamDomain::placement);
    const UserDrop a = drop_users(layout, 1, 0.035, s1);
    const UserDrop b = drop_users(layout, 1, 0.035, s2);
    CHECK(a.at(0, 0).x == b.at(0, 0).x);
    CHECK(a.at(0, 0).y == b.at(0, 0).y);
}

TEST_CASE("drop_users: positions stay inside their hexagon and off the base") {
    const CellLayout layout = build_hex_layout(7, 2.0);
    Substream s(123, StreamDomain::placement);
    const UserDrop drop = drop_users(layout, 40, 0.035, s);
    for (std::size_t j = 0; j < 7; ++j) {
        for (std::size_t k = 0; k < 40; ++k) {
            CHECK(point_in_hexagon(drop.at(j, k), layout.base_positions[j], 2.0));
            CHECK(distance_km(drop.at(j, k), layout.base_positions[j]) >= 0.035);
        }
    }
}

// Independent oracle for the mean center distance of a uniform point in a
// hexagon: sample by triangle decomposition with a different generator.
// Closed form for circumradius R: E[r] = R * (1/3 + ln(3)/4) ~ 0.607986*R.
static double hexagon_mean_distance_oracle(double radius, std::size_t n) {
    std::mt19937_64 gen(0xABCDEF);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> tri(0, 5);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int t = tri(gen);
        const double a0 = t * std::numbers::pi / 3.0;
        const double a1 = (t + 1) * std::numbers::pi / 3.0;
        const double bx = radius * std::cos(a0), by = radius * std::sin(a0);
        const double cx = radius * std::cos(a1), cy = radius * std::sin(a1);
        const double r1 = std::sqrt(unit(gen));
        const double r2 = unit(gen);
        const double px = r1 * ((1.0 - r2) * bx + r2 * cx);
        const double py = r1 * ((1.0 - r2) * by + r2 * cy);
        sum += std::hypot(px, py);
    }
    return sum / double(n);
}

TEST_CASE("drop_users: mean distance to the base matches the hexagon oracle") {
    const double closed_form = 2.0 * (1.0 / 3.0 + std::log(3.0) / 4.0);
    const double oracle = hexagon_mean_distance_oracle(2.0, 400000);
    CHECK(oracle == doctest::Approx(closed_form).epsilon(0.005));

    const CellLayout layout = build_hex_layout(7, 2.0);
    Substream s(2024, StreamDomain::placement);
    const UserDrop drop = drop_users(layout, 1000, 0.001, s);
    double mean = 0.0;
    for (std::size_t j = 0; j < 7; ++j) {
        for (std::size_t k = 0; k < 1000; ++k) {
            mean += distance_km(drop.at(j, k), layout.base_positions[j]);
        }
    }
    mean /= 7000.0;
    CHECK(mean == doctest::Approx(oracle).epsilon(0.02));
    CHECK(mean / 2.0 > 0.58);
    CHECK(mean / 2.0 < 0.64);
}

TEST_CASE("cost231 anchor values") {
    LinkBudget budget; // f=1900, h_b=30, h_m=1.5, C=3
    CHECK(std::abs(cost231_pathloss_db(1.0, budget) - 140.04) < 0.05);
    CHECK(std::abs(cost231_pathloss_db(2.0, budget) - 150.64) < 0.05);
    CHECK_THROWS_AS(cost231_pathloss_db(0.0, budget), std::domain_error);
    CHECK_THROWS_AS(cost231_pathloss_db(-1.0, budget), std::domain_error);
}

TEST_CASE("path loss is a log-distance model: doubling d adds a constant") {
    LinkBudget budget;
    const double slope_db = cost231_pathloss_db(2.0, budget) - cost231_pathloss_db(1.0, budget);
    for (double d : {0.05, 0.3, 1.7, 6.0, 15.0}) {
        CHECK(cost231_pathloss_db(2.0 * d, budget) - cost231_pathloss_db(d, budget) ==
              doctest::Approx(slope_db).epsilon(1e-12));
    }
}

TEST_CASE("path loss is strictly increasing and continuous in d") {
    LinkBudget budget;
    double prev = cost231_pathloss_db(0.01, budget);
    for (double d = 0.011; d < 25.0; d *= 1.07) {
        const double pl = cost231_pathloss_db(d, budget);
        CHECK(pl > prev);
        CHECK(pl - prev < 3.0); // small step, small increment
        prev = pl;
    }
}

TEST_CASE("gain mapping anchors") {
    CHECK(gain_from_pathloss_db(0.0) == 1.0);
    CHECK(gain_from_pathloss_db(140.04) == doctest::Approx(9.91e-15).epsilon(0.001));
}

TEST_CASE("compute_gains: equal-power mode and in-range betas") {
    const GainTensor equal = make_equal_gains(7, 10);
    CHECK(equal.mean_beta == 1.0);
    CHECK(equal.at(3, 5, 9) == 1.0);

    const CellLayout layout = build_hex_layout(7, 2.0);
    Substream s(5, StreamDomain::placement);
    const UserDrop drop = drop_users(layout, 20, 0.035, s);
    const GainTensor gains = compute_gains(layout, drop, LinkBudget{});
    for (double b : gains.beta) {
        CHECK(b > 0.0);
        CHECK(std::isfinite(b));
    }
    double mean = 0.0;
    for (std::size_t j = 0; j < 7; ++j) {
        for (std::size_t k = 0; k < 20; ++k) mean += gains.at(0, j, k);
    }
    CHECK(gains.mean_beta == doctest::Approx(mean / 140.0).epsilon(1e-12));
}

TEST_CASE("gains are invariant under user relabeling within a cell") {
    const CellLayout layout = build_hex_layout(7, 2.0);
    Substream s(17, StreamDomain::placement);
    UserDrop drop = drop_users(layout, 6, 0.035, s);
    const GainTensor before = compute_gains(layout, drop, LinkBudget{});

    // swap users 1 and 4 of cell 2
    std::swap(drop.positions[2 * 6 + 1], drop.positions[2 * 6 + 4]);
    const GainTensor after = compute_gains(layout, drop, LinkBudget{});
    for (std::size_t l = 0; l < 7; ++l) {
        CHECK(after.at(l, 2, 1) == before.at(l, 2, 4));
        CHECK(after.at(l, 2, 4) == before.at(l, 2, 1));
        CHECK(after.at(l, 3, 2) == before.at(l, 3, 2));
    }
}

TEST_CASE("co-located users receive identical gains when shadowing is off") {
    const CellLayout layout = build_hex_layout(1, 2.0);
    UserDrop drop;
    drop.cells = 1;
    drop.users_per_cell = 2;
    drop.min_distance_km = 0.0;
    drop.positions = {{0.5, 0.3}, {0.5, 0.3}};
    const GainTensor gains = compute_gains(layout, drop, LinkBudget{});
    CHECK(gains.at(0, 0, 0) == gains.at(0, 0, 1));
}

TEST_CASE("log-normal shadowing perturbs gains only when enabled") {
    const CellLayout layout = build_hex_layout(1, 2.0);
    Substream place(3, StreamDomain::placement);
    const UserDrop drop = drop_users(layout, 4, 0.035, place);

    LinkBudget shadowed;
    shadowed.shadowing_sigma_db = 8.0;
    Substream shadow(3, StreamDomain::shadowing);
    const GainTensor with = compute_gains(layout, drop, shadowed, &shadow);
    const GainTensor without = compute_gains(layout, drop, LinkBudget{});
    bool any_differs = false;
    for (std::size_t i = 0; i < with.beta.size(); ++i) {
        if (with.beta[i] != without.beta[i]) any_differs = true;
        CHECK(with.beta[i] > 0.0);
    }
    CHECK(any_differs);
}

TEST_CASE("rho_r from the default budget is 197 dB") {
    CHECK(budget_rho_r_db(LinkBudget{}) == doctest::Approx(197.0));
}
