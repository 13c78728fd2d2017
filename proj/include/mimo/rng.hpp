#pragma once
// Counter-based random streams (Philox4x32-10) with Box-Muller Gaussian
// sampling. Streams are keyed, so any (seed, trial) pair can be opened
// independently of execution order -- parallel trials reproduce bit-exactly.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace mimo {

namespace detail {

inline void philox_round(std::uint32_t c[4], const std::uint32_t k[2]) {
    const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c[0];
    const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c[2];
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    const std::uint32_t n0 = hi1 ^ c[1] ^ k[0];
    const std::uint32_t n2 = hi0 ^ c[3] ^ k[1];
    c[0] = n0;
    c[1] = lo1;
    c[2] = n2;
    c[3] = lo0;
}

} // namespace detail

// One 128-bit Philox4x32-10 block. ctr/key layout follows Random123.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    std::uint32_t c[4] = {ctr[0], ctr[1], ctr[2], ctr[3]};
    std::uint32_t k[2] = {key[0], key[1]};
    for (int r = 0; r < 10; ++r) {
        detail::philox_round(c, k);
        k[0] += 0x9E3779B9u; // Weyl increments
        k[1] += 0xBB67AE85u;
    }
    return {c[0], c[1], c[2], c[3]};
}

// SplitMix64 finalizer; used only for deriving stream keys.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Published mixing function: the per-trial stream key. Trial t of an
// experiment with a given master seed always opens the same stream, no
// matter which worker runs it.
inline std::uint64_t trial_stream_key(std::uint64_t master_seed, std::uint64_t trial_index) {
    return splitmix64(master_seed + (trial_index + 2) * 0x9E3779B97F4A7C15ull);
}

// Stream key for the user drop / gain generation (shared by all trials).
inline std::uint64_t drop_stream_key(std::uint64_t master_seed) {
    return splitmix64(master_seed + 0x9E3779B97F4A7C15ull);
}

// Independent sub-streams within one trial, selected by the counter's
// third word. Keeps channel, noise and symbol draws non-overlapping.
enum class StreamDomain : std::uint32_t {
    channel = 0,
    noise = 1,
    symbols = 2,
    training = 3,
    shadowing = 4,
    placement = 5,
};

// A deterministic uniform/Gaussian source over one (key, domain) lane.
class Substream {
public:
    Substream(std::uint64_t key, StreamDomain domain)
        : key_{std::uint32_t(key), std::uint32_t(key >> 32)},
          domain_(std::uint32_t(domain)) {}

    // Uniform double in the open interval (0, 1).
    double next_unit() {
        if (cache_fill_ == 0) refill();
        const std::uint64_t w = cache_[--cache_fill_];
        return double(w >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    // Standard normal N(0,1) via Box-Muller.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly-symmetric complex Gaussian CN(0,1): real and imaginary
    // parts are independent N(0, 1/2), so E|z|^2 = 1.
    void next_cn(double& re, double& im) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        re = r * std::cos(a);
        im = r * std::sin(a);
    }

    // Unit-modulus QPSK symbol (+-1 +-i)/sqrt(2).
    void next_qpsk(double& re, double& im) {
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        const double u = next_unit();
        const int q = u < 0.5 ? (u < 0.25 ? 0 : 1) : (u < 0.75 ? 2 : 3);
        re = (q & 1) ? -inv_sqrt2 : inv_sqrt2;
        im = (q & 2) ? -inv_sqrt2 : inv_sqrt2;
    }

private:
    void refill() {
        const auto blk = philox4x32({std::uint32_t(idx_), std::uint32_t(idx_ >> 32), domain_, 0u},
                                    key_);
        ++idx_;
        cache_[1] = std::uint64_t(blk[0]) | (std::uint64_t(blk[1]) << 32);
        cache_[0] = std::uint64_t(blk[2]) | (std::uint64_t(blk[3]) << 32);
        cache_fill_ = 2;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t domain_;
    std::uint64_t idx_ = 0;
    std::uint64_t cache_[2] = {0, 0};
    int cache_fill_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mimo
