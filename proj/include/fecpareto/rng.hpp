#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fecpareto {

// Seeding scheme v1. Every Monte-Carlo trial draws from its own stream seeded
// by derive_seed(master, trial_index), so results do not depend on how trials
// are partitioned across workers.

inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    uint64_t s = master ^ (0xA0761D6478BD642Full * (index + 1));
    splitmix64_next(s);
    return splitmix64_next(s);
}

// xoshiro256++ (Blackman/Vigna), state expanded from a 64-bit seed via
// splitmix64.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(uint64_t seed) {
        for (auto& w : s_) w = splitmix64_next(seed);
    }

    using result_type = uint64_t;
    static constexpr uint64_t min() { return 0; }
    static constexpr uint64_t max() { return ~0ull; }

    uint64_t operator()() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on (0, 1]
    double uniform() { return (((*this)() >> 11) + 1) * 0x1.0p-53; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

// Box-Muller over xoshiro uniforms. Pinned here (rather than relying on
// std::normal_distribution) so that noise sequences are part of the versioned
// seeding contract.
class GaussianSampler {
public:
    explicit GaussianSampler(uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = rng_.uniform();
        double u2 = rng_.uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Xoshiro256pp& bits() { return rng_; }

private:
    Xoshiro256pp rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace fecpareto
