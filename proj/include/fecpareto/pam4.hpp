#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fecpareto/errors.hpp"
#include "fecpareto/rng.hpp"

namespace fecpareto {

enum class Scheme { BICM, MLC };

inline std::string to_string(Scheme s) { return s == Scheme::BICM ? "bicm" : "mlc"; }

enum class Labeling { Gray, Natural };

// (msb, lsb) -> level. Gray: 00->-3, 01->-1, 11->+1, 10->+3.
// Natural: 00->-3, 01->-1, 10->+1, 11->+3.
inline double map_bits(int msb, int lsb, Labeling lab) {
    static constexpr std::array<double, 4> gray{-3.0, -1.0, +3.0, +1.0};     // index msb*2+lsb
    static constexpr std::array<double, 4> natural{-3.0, -1.0, +1.0, +3.0};
    int i = (msb << 1) | lsb;
    return lab == Labeling::Gray ? gray[i] : natural[i];
}

inline int level_index(double level) { return static_cast<int>((level + 3.0) / 2.0); }

// bits (msb, lsb) of each level -3,-1,+1,+3 under a labeling
inline std::pair<int, int> level_bits(int level_idx, Labeling lab) {
    static constexpr std::array<std::pair<int, int>, 4> gray{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}};
    static constexpr std::array<std::pair<int, int>, 4> natural{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    return lab == Labeling::Gray ? gray[level_idx] : natural[level_idx];
}

// snr_db = 10 log10(Es / sigma^2) with Es = 5, the mean square of the
// equiprobable levels {+-1, +-3}.
struct ChannelParams {
    double snr_db = 0.0;
    double sigma = 1.0;

    static constexpr double kEs = 5.0;

    static ChannelParams from_snr_db(double snr_db) {
        ChannelParams ch;
        ch.snr_db = snr_db;
        ch.sigma = std::sqrt(kEs * std::pow(10.0, -snr_db / 10.0));
        return ch;
    }
    static ChannelParams from_sigma(double sigma) {
        ChannelParams ch;
        ch.sigma = sigma;
        ch.snr_db = 10.0 * std::log10(kEs / (sigma * sigma));
        return ch;
    }
};

inline void awgn(std::span<const double> levels, const ChannelParams& ch, GaussianSampler& rng,
                 std::span<double> out) {
    for (size_t i = 0; i < levels.size(); ++i)
        out[i] = levels[i] + ch.sigma * rng();
}

inline std::vector<double> awgn(std::span<const double> levels, const ChannelParams& ch,
                                GaussianSampler& rng) {
    std::vector<double> out(levels.size());
    awgn(levels, ch, rng, out);
    return out;
}

struct BitLlrs {
    double msb = 0.0;
    double lsb = 0.0;
};

// Exact bit LLRs ln(P(bit=0|y)/P(bit=1|y)) for equiprobable levels, computed
// with max-subtraction. The common Gaussian normalization cancels.
inline BitLlrs bit_llrs(double y, const ChannelParams& ch, Labeling lab) {
    const double inv2s2 = 1.0 / (2.0 * ch.sigma * ch.sigma);
    std::array<double, 4> a;
    double amax = -1e300;
    for (int i = 0; i < 4; ++i) {
        double s = -3.0 + 2.0 * i;
        a[i] = -(y - s) * (y - s) * inv2s2;
        amax = std::max(amax, a[i]);
    }
    double num_msb = 0, den_msb = 0, num_lsb = 0, den_lsb = 0;
    for (int i = 0; i < 4; ++i) {
        double e = std::exp(a[i] - amax);
        auto [msb, lsb] = level_bits(i, lab);
        (msb ? den_msb : num_msb) += e;
        (lsb ? den_lsb : num_lsb) += e;
    }
    return {std::log(num_msb) - std::log(den_msb), std::log(num_lsb) - std::log(den_lsb)};
}

inline uint8_t hard_bit(double llr) { return llr < 0.0 ? 1 : 0; }

// MLC second stage: of the two levels whose LSB matches the decoded LSB, pick
// the one nearer to y and return its MSB. Exact midpoints go to the lower
// level.
inline int conditional_msb(double y, int lsb, Labeling lab) {
    if (lab != Labeling::Natural)
        throw ConfigError("conditional_msb: only the natural labeling is supported");
    // natural labeling: lsb=0 -> {-3 (msb 0), +1 (msb 1)}, midpoint -1
    //                   lsb=1 -> {-1 (msb 0), +3 (msb 1)}, midpoint +1
    double midpoint = lsb ? +1.0 : -1.0;
    return y > midpoint ? 1 : 0;
}

inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Exact hard-decision LSB error probability under ML symbol thresholds
// {-2, 0, +2}, averaging the threshold-crossing integrals per level.
inline double raw_lsb_ber(const ChannelParams& ch, Labeling lab) {
    const double q1 = q_func(1.0 / ch.sigma);
    const double q3 = q_func(3.0 / ch.sigma);
    const double q5 = q_func(5.0 / ch.sigma);
    if (lab == Labeling::Natural) {
        // outer levels: Q1 - Q3 + Q5, inner levels: 2 Q1 - Q3
        return 1.5 * q1 - q3 + 0.5 * q5;
    }
    // Gray LSB pattern (0,1,1,0): outer levels Q1 - Q5, inner levels Q1 + Q3
    return q1 + 0.5 * (q3 - q5);
}

// Exact hard-decision PAM4 symbol error rate (nearest-level decisions).
inline double raw_symbol_error_rate(const ChannelParams& ch) {
    return 1.5 * q_func(1.0 / ch.sigma);
}

} // namespace fecpareto
