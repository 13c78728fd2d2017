#pragma once
// Multi-cell layout, user placement and COST231-Hata large-scale gains.

#include "mimo/rng.hpp"

#include <cstddef>
#include <vector>

namespace mimo {

struct Point {
    double x = 0.0; // km
    double y = 0.0; // km
};

double distance_km(const Point& a, const Point& b);

// Hexagons have their circumradius along +x (vertices at 60*n degrees),
// so neighbor centers sit at 30 + 60*n degrees, sqrt(3)*R away.
struct CellLayout {
    std::vector<Point> base_positions; // entry 0 is the center cell
    double cell_radius_km = 2.0;       // hexagon circumradius

    std::size_t cells() const { return base_positions.size(); }
};

struct UserDrop {
    std::size_t cells = 0, users_per_cell = 0;
    std::vector<Point> positions; // [cell * users_per_cell + user]
    double min_distance_km = 0.0;

    const Point& at(std::size_t cell, std::size_t user) const {
        return positions[cell * users_per_cell + user];
    }
};

struct LinkBudget {
    double carrier_mhz = 1900.0;
    double base_height_m = 30.0;
    double mobile_height_m = 1.5;
    double clutter_db = 3.0;        // metropolitan correction
    double tx_power_dbm = 23.0;
    double noise_power_dbm = -174.0;
    double shadowing_sigma_db = 0.0; // 0 disables shadowing
};

// beta[l][j][k]: linear power gain from user k of cell j to base l.
struct GainTensor {
    std::size_t cells = 0, users_per_cell = 0;
    std::vector<double> beta; // [l * B * K + j * K + k]
    double mean_beta = 1.0;   // mean over base 0's B*K entries

    double at(std::size_t l, std::size_t j, std::size_t k) const {
        return beta[(l * cells + j) * users_per_cell + k];
    }
    double& at(std::size_t l, std::size_t j, std::size_t k) {
        return beta[(l * cells + j) * users_per_cell + k];
    }
};

// Only B = 1 and B = 7 (center plus first interfering ring) are supported.
CellLayout build_hex_layout(std::size_t cells, double radius_km);

bool point_in_hexagon(const Point& p, const Point& center, double circumradius_km);

UserDrop drop_users(const CellLayout& layout, std::size_t users_per_cell,
                    double min_distance_km, Substream& rng);

// COST231-Hata urban path loss in dB; large-city mobile antenna correction.
double cost231_pathloss_db(double distance_km, const LinkBudget& budget);

// Linear gain for a given path loss: 10^(-PL/10).
double gain_from_pathloss_db(double pathloss_db);

GainTensor compute_gains(const CellLayout& layout, const UserDrop& drop,
                         const LinkBudget& budget, Substream* shadowing_rng = nullptr);

// Unit gains for every link ("received powers from all the users are unity").
GainTensor make_equal_gains(std::size_t cells, std::size_t users_per_cell);

// rho_r implied by the link budget: tx power over noise power, in dB.
double budget_rho_r_db(const LinkBudget& budget);

// columns: cell_index, user_index, x_km, y_km
void write_drop_csv(const std::string& path, const UserDrop& drop);

} // namespace mimo
