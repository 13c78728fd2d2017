#include "mimo/channel.hpp"

#include "mimo/csv.hpp"

#include <cmath>
#include <stdexcept>

namespace mimo {

double SystemConfig::rho_r_linear() const {
    return std::pow(10.0, rho_r_db / 10.0);
}

CMat sample_small_scale(std::size_t antennas, std::size_t vectors, Substream& rng) {
    if (antennas < 1 || vectors < 1) {
        throw std::invalid_argument("sample_small_scale needs antennas >= 1 and vectors >= 1");
    }
    CMat h(antennas, vectors);
    const std::size_t n = antennas * vectors;
    for (std::size_t i = 0; i < n; ++i) {
        rng.next_cn(h.re[i], h.im[i]);
    }
    return h;
}

ChannelSet compose_channels(CMat h, std::size_t cells, std::size_t users_per_cell,
                            const std::vector<double>& beta) {
    if (h.cols != cells * users_per_cell || beta.size() != h.cols) {
        throw std::invalid_argument("compose_channels: dimension mismatch");
    }
    ChannelSet sets;
    sets.cells = cells;
    sets.users_per_cell = users_per_cell;
    sets.beta_view = beta;
    sets.g = std::move(h);
    for (std::size_t c = 0; c < sets.g.cols; ++c) {
        const double s = std::sqrt(beta[c]);
        if (s != 1.0) {
            simd::scale_real(sets.g.rows, s, sets.g.col_re(c), sets.g.col_im(c));
        }
    }
    return sets;
}

PilotEstimate pilot_estimate(const ChannelSet& sets, int kappa) {
    if (kappa != 0 && kappa != 1) throw std::invalid_argument("kappa must be 0 or 1");
    if (sets.g.cols != sets.cells * sets.users_per_cell) {
        throw std::invalid_argument("pilot_estimate: channel set does not cover all users");
    }
    const std::size_t m = sets.antennas();
    const std::size_t k_users = sets.users_per_cell;

    PilotEstimate est;
    est.kappa_used = kappa;
    est.g_hat = CMat(m, k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        const std::size_t own = flat_index(0, k, k_users);
        std::copy(sets.g.col_re(own), sets.g.col_re(own) + m, est.g_hat.col_re(k));
        std::copy(sets.g.col_im(own), sets.g.col_im(own) + m, est.g_hat.col_im(k));
        if (kappa == 1) {
            for (std::size_t j = 1; j < sets.cells; ++j) {
                const std::size_t c = flat_index(j, k, k_users);
                simd::axpy(m, {1.0, 0.0}, sets.g.col_re(c), sets.g.col_im(c),
                           est.g_hat.col_re(k), est.g_hat.col_im(k));
            }
        }
    }
    return est;
}

CVec assemble_received(const ChannelSet& sets, const CVec& symbols, double rho_r,
                       const CVec& noise) {
    const std::size_t m = sets.antennas();
    if (symbols.size() != sets.g.cols) {
        throw std::invalid_argument("assemble_received: one symbol per user required");
    }
    if (noise.size() != m) {
        throw std::invalid_argument("assemble_received: noise vector must have M entries");
    }
    CVec y = noise;
    const double amp = std::sqrt(rho_r / double(m));
    for (std::size_t c = 0; c < sets.g.cols; ++c) {
        const std::complex<double> s = amp * symbols.at(c);
        simd::axpy(m, s, sets.g.col_re(c), sets.g.col_im(c), y.re.data(), y.im.data());
    }
    return y;
}

CVec assemble_received(const ChannelSet& sets, const CVec& symbols, double rho_r,
                       Substream& noise_rng) {
    CVec w(sets.antennas());
    for (std::size_t i = 0; i < w.size(); ++i) {
        noise_rng.next_cn(w.re[i], w.im[i]);
    }
    return assemble_received(sets, symbols, rho_r, w);
}

CVec draw_qpsk(std::size_t n, Substream& rng) {
    CVec q(n);
    for (std::size_t i = 0; i < n; ++i) {
        rng.next_qpsk(q.re[i], q.im[i]);
    }
    return q;
}

CVec draw_symbols(std::size_t n, Substream& rng, SymbolAlphabet alphabet) {
    if (alphabet == SymbolAlphabet::qpsk) return draw_qpsk(n, rng);
    CVec q(n);
    for (std::size_t i = 0; i < n; ++i) {
        rng.next_cn(q.re[i], q.im[i]);
    }
    return q;
}

void write_channels_csv(const std::string& path, const CMat& g) {
    CsvWriter csv(path, {"col_index", "antenna_index", "re", "im"});
    for (std::size_t c = 0; c < g.cols; ++c) {
        for (std::size_t r = 0; r < g.rows; ++r) {
            csv.write_row({fmt_count(c), fmt_count(r), fmt_full(g.at(r, c).real()),
                           fmt_full(g.at(r, c).imag())});
        }
    }
}

} // namespace mimo
