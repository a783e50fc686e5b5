#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace epower {

/// 64-bit seed for any sampler in this library.  Same seed + same request
/// sequence reproduces bit-identical output.
struct Seed {
    std::uint64_t value = 0;
};

namespace detail {

// SplitMix64 (Steele, Lea, Vigna) -- used for state expansion and as the
// avalanche mixer for deriving child seeds.
inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace detail

/// Child-stream seed for task `index`: parent and index are pushed through
/// the SplitMix64 avalanche so parallel streams are order-independent.
inline Seed derive_seed(Seed parent, std::uint64_t index) {
    std::uint64_t s = parent.value;
    std::uint64_t a = detail::splitmix64(s);
    std::uint64_t t = index ^ 0xA3EC4E93C9A6A27Full;
    std::uint64_t b = detail::splitmix64(t);
    std::uint64_t m = a ^ b;
    return Seed{detail::splitmix64(m)};
}

/// xoshiro256++ 1.0 (Blackman, Vigna), seeded through SplitMix64.
/// Gaussians come from Box-Muller on open-interval uniforms, so streams are
/// reproducible across platforms with the same libm behaviour.
class Rng {
  public:
    explicit Rng(Seed seed) {
        std::uint64_t sm = seed.value;
        for (auto& w : state_) w = detail::splitmix64(sm);
        has_spare_ = false;
        spare_ = 0.0;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in the open interval (0,1).
    double uniform_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open01();
        const double u2 = uniform_open01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    /// Complex with independent N(0,1) real and imaginary parts.
    std::complex<double> complex_gaussian() {
        const double re = gaussian();
        return {re, gaussian()};
    }

  private:
    std::uint64_t state_[4];
    bool has_spare_;
    double spare_;
};

} // namespace epower
