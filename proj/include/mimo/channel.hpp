#pragma once
// Small-scale fading, channel composition, pilot-contaminated estimates and
// uplink received-signal assembly, all as seen from base station 1.

#include "mimo/cmat.hpp"
#include "mimo/geometry.hpp"
#include "mimo/rng.hpp"

#include <cstdint>
#include <optional>

namespace mimo {

struct CoherenceBudget {
    std::size_t coherent_symbols = 0;    // T_c
    std::size_t coherent_subcarriers = 0; // N_c
    std::size_t training_symbols = 0;     // T
};

// Counts and flags of one simulated system. Either users_per_cell or alpha
// can drive the other; config parsing enforces K = round(alpha * M).
struct SystemConfig {
    std::size_t cells = 7;         // B
    std::size_t users_per_cell = 50; // K
    std::size_t antennas = 50;     // M
    double alpha = 1.0;            // K / M
    double rho_r_db = 20.0;
    int kappa = 1;                 // 0 = perfect estimate, 1 = pilot contaminated
    std::uint64_t master_seed = 12345;
    std::optional<CoherenceBudget> coherence;

    double rho_r_linear() const;
    std::size_t total_users() const { return cells * users_per_cell; }
};

// Flattened column index of user k in cell j (0-based), matching the
// single-index convention i = (j-1)K + k of the double-index channels.
inline std::size_t flat_index(std::size_t cell, std::size_t user, std::size_t users_per_cell) {
    return cell * users_per_cell + user;
}
inline std::pair<std::size_t, std::size_t> unflatten_index(std::size_t i,
                                                           std::size_t users_per_cell) {
    return {i / users_per_cell, i % users_per_cell};
}

// All B*K channel vectors seen at one base station, one per column.
struct ChannelSet {
    CMat g; // antennas x (cells * users_per_cell)
    std::size_t cells = 0, users_per_cell = 0;
    std::vector<double> beta_view; // gain per column, same flat order

    std::size_t antennas() const { return g.rows; }
};

struct PilotEstimate {
    CMat g_hat; // antennas x users_per_cell, own-cell users only
    int kappa_used = 0;
};

// M x n matrix of i.i.d. CN(0,1) entries.
CMat sample_small_scale(std::size_t antennas, std::size_t vectors, Substream& rng);

// Scales column (j,k) of h by sqrt(beta[j][k]); beta is the gain slice for
// the observing base, flat-indexed.
ChannelSet compose_channels(CMat h, std::size_t cells, std::size_t users_per_cell,
                            const std::vector<double>& beta);

// ghat_k = g_{own,k} + sqrt(kappa) * sum_{j != own} g_{j,k}; no estimation
// noise beyond the contaminating pilots. Observing base is cell 0.
PilotEstimate pilot_estimate(const ChannelSet& sets, int kappa);

// y = sqrt(rho_r / M) * sum_i g_i q_i + w, with w given explicitly.
CVec assemble_received(const ChannelSet& sets, const CVec& symbols, double rho_r,
                       const CVec& noise);

// Same, drawing w with i.i.d. CN(0,1) entries from the stream.
CVec assemble_received(const ChannelSet& sets, const CVec& symbols, double rho_r,
                       Substream& noise_rng);

// n i.i.d. unit-power QPSK symbols.
CVec draw_qpsk(std::size_t n, Substream& rng);

// Unit-power data symbols; QPSK by default, CN(0,1) as an option.
enum class SymbolAlphabet { qpsk, cgauss };
CVec draw_symbols(std::size_t n, Substream& rng, SymbolAlphabet alphabet);

// columns: col_index, antenna_index, re, im
void write_channels_csv(const std::string& path, const CMat& g);

} // namespace mimo
