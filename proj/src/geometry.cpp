#include "mimo/geometry.hpp"

#include "mimo/csv.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mimo {

double distance_km(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

CellLayout build_hex_layout(std::size_t cells, double radius_km) {
    if (cells != 1 && cells != 7) {
        throw std::invalid_argument("unsupported cell count B=" + std::to_string(cells) +
                                    " (supported layouts: B=1, B=7)");
    }
    if (!(radius_km > 0.0)) {
        throw std::invalid_argument("cell radius must be positive");
    }
    CellLayout layout;
    layout.cell_radius_km = radius_km;
    layout.base_positions.push_back({0.0, 0.0});
    if (cells == 7) {
        const double spacing = std::numbers::sqrt3 * radius_km;
        for (int n = 0; n < 6; ++n) {
            const double ang = (30.0 + 60.0 * n) * std::numbers::pi / 180.0;
            layout.base_positions.push_back({spacing * std::cos(ang), spacing * std::sin(ang)});
        }
    }
    return layout;
}

bool point_in_hexagon(const Point& p, const Point& center, double circumradius_km) {
    const double apothem = 0.5 * std::numbers::sqrt3 * circumradius_km;
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    for (int n = 0; n < 6; ++n) {
        const double ang = (30.0 + 60.0 * n) * std::numbers::pi / 180.0;
        if (dx * std::cos(ang) + dy * std::sin(ang) > apothem + 1e-12) return false;
    }
    return true;
}

UserDrop drop_users(const CellLayout& layout, std::size_t users_per_cell,
                    double min_distance_km, Substream& rng) {
    if (users_per_cell < 1) throw std::invalid_argument("users_per_cell must be >= 1");
    if (min_distance_km >= layout.cell_radius_km) {
        throw std::invalid_argument("min_distance must be smaller than the cell radius");
    }

    const double r = layout.cell_radius_km;
    UserDrop drop;
    drop.cells = layout.cells();
    drop.users_per_cell = users_per_cell;
    drop.min_distance_km = min_distance_km;
    drop.positions.resize(drop.cells * users_per_cell);

    constexpr std::size_t max_attempts = 1000000;
    for (std::size_t j = 0; j < drop.cells; ++j) {
        const Point& base = layout.base_positions[j];
        for (std::size_t k = 0; k < users_per_cell; ++k) {
            Point p;
            std::size_t attempt = 0;
            for (;; ++attempt) {
                if (attempt >= max_attempts) {
                    throw std::runtime_error("user placement did not converge");
                }
                p.x = base.x + (2.0 * rng.next_unit() - 1.0) * r;
                p.y = base.y + (2.0 * rng.next_unit() - 1.0) * r;
                if (!point_in_hexagon(p, base, r)) continue;
                if (distance_km(p, base) < min_distance_km) continue;
                break;
            }
            drop.positions[j * users_per_cell + k] = p;
        }
    }
    return drop;
}

double cost231_pathloss_db(double distance_km, const LinkBudget& budget) {
    if (!(distance_km > 0.0)) {
        throw std::domain_error("path loss undefined for non-positive distance");
    }
    const double log_f = std::log10(budget.carrier_mhz);
    const double log_hb = std::log10(budget.base_height_m);
    const double lm = std::log10(11.75 * budget.mobile_height_m);
    const double a_hm = 3.2 * lm * lm - 4.97; // large-city mobile correction
    return 46.3 + 33.9 * log_f - 13.82 * log_hb - a_hm +
           (44.9 - 6.55 * log_hb) * std::log10(distance_km) + budget.clutter_db;
}

double gain_from_pathloss_db(double pathloss_db) {
    return std::pow(10.0, -pathloss_db / 10.0);
}

GainTensor compute_gains(const CellLayout& layout, const UserDrop& drop,
                         const LinkBudget& budget, Substream* shadowing_rng) {
    if (drop.cells != layout.cells()) {
        throw std::invalid_argument("drop/layout cell count mismatch");
    }
    const std::size_t b = drop.cells;
    const std::size_t k = drop.users_per_cell;

    GainTensor gains;
    gains.cells = b;
    gains.users_per_cell = k;
    gains.beta.resize(b * b * k);

    const bool shadow = budget.shadowing_sigma_db > 0.0 && shadowing_rng != nullptr;
    for (std::size_t l = 0; l < b; ++l) {
        for (std::size_t j = 0; j < b; ++j) {
            for (std::size_t u = 0; u < k; ++u) {
                const double d = distance_km(layout.base_positions[l], drop.at(j, u));
                double beta = gain_from_pathloss_db(cost231_pathloss_db(d, budget));
                if (shadow) {
                    beta *= std::pow(10.0, budget.shadowing_sigma_db *
                                               shadowing_rng->next_normal() / 10.0);
                }
                gains.at(l, j, u) = beta;
            }
        }
    }

    double sum = 0.0;
    for (std::size_t j = 0; j < b; ++j) {
        for (std::size_t u = 0; u < k; ++u) {
            sum += gains.at(0, j, u);
        }
    }
    gains.mean_beta = sum / double(b * k);
    return gains;
}

GainTensor make_equal_gains(std::size_t cells, std::size_t users_per_cell) {
    GainTensor gains;
    gains.cells = cells;
    gains.users_per_cell = users_per_cell;
    gains.beta.assign(cells * cells * users_per_cell, 1.0);
    gains.mean_beta = 1.0;
    return gains;
}

double budget_rho_r_db(const LinkBudget& budget) {
    return budget.tx_power_dbm - budget.noise_power_dbm;
}

void write_drop_csv(const std::string& path, const UserDrop& drop) {
    CsvWriter csv(path, {"cell_index", "user_index", "x_km", "y_km"});
    for (std::size_t j = 0; j < drop.cells; ++j) {
        for (std::size_t k = 0; k < drop.users_per_cell; ++k) {
            const Point& p = drop.at(j, k);
            csv.write_row({fmt_count(j), fmt_count(k), fmt_full(p.x), fmt_full(p.y)});
        }
    }
}

} // namespace mimo
