#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fecpareto/pam4.hpp"

using namespace fecpareto;

namespace {

// direct four-term Gaussian mixture, no max-subtraction
BitLlrs naive_llrs(double y, double sigma, Labeling lab) {
    double num_msb = 0, den_msb = 0, num_lsb = 0, den_lsb = 0;
    for (int i = 0; i < 4; ++i) {
        double s = -3.0 + 2.0 * i;
        double w = std::exp(-(y - s) * (y - s) / (2.0 * sigma * sigma));
        auto [msb, lsb] = level_bits(i, lab);
        (msb ? den_msb : num_msb) += w;
        (lsb ? den_lsb : num_lsb) += w;
    }
    return {std::log(num_msb / den_msb), std::log(num_lsb / den_lsb)};
}

double nearest_level(double y) {
    // ML thresholds at -2, 0, +2; boundary ties go to the lower level
    if (y <= -2.0) return -3.0;
    if (y <= 0.0) return -1.0;
    if (y <= 2.0) return 1.0;
    return 3.0;
}

} // namespace

TEST_CASE("labeling tables", "[pam4]") {
    CHECK(map_bits(1, 0, Labeling::Gray) == 3.0);
    CHECK(map_bits(1, 1, Labeling::Natural) == 3.0);
    CHECK(map_bits(0, 0, Labeling::Gray) == -3.0);
    CHECK(map_bits(0, 0, Labeling::Natural) == -3.0);
    CHECK(map_bits(0, 1, Labeling::Gray) == -1.0);
    CHECK(map_bits(1, 1, Labeling::Gray) == 1.0);
    CHECK(map_bits(1, 0, Labeling::Natural) == 1.0);
    // labeling and bit extraction agree
    for (auto lab : {Labeling::Gray, Labeling::Natural})
        for (int msb = 0; msb < 2; ++msb)
            for (int lsb = 0; lsb < 2; ++lsb) {
                int idx = level_index(map_bits(msb, lsb, lab));
                CHECK(level_bits(idx, lab) == std::pair{msb, lsb});
            }
}

TEST_CASE("channel params round-trip", "[pam4]") {
    for (double snr : {-3.0, 0.0, 10.0, 15.2897, 40.0}) {
        ChannelParams ch = ChannelParams::from_snr_db(snr);
        CHECK(ChannelParams::from_sigma(ch.sigma).snr_db ==
              Catch::Approx(snr).epsilon(1e-12).margin(1e-12));
    }
}

TEST_CASE("awgn: deterministic given the seed, identity in the sigma->0 limit", "[pam4]") {
    std::vector<double> levels{-3, -1, 1, 3, 3, -1};
    GaussianSampler a(derive_seed(99, 0)), b(derive_seed(99, 0));
    ChannelParams ch = ChannelParams::from_snr_db(12.0);
    auto ya = awgn(levels, ch, a);
    auto yb = awgn(levels, ch, b);
    CHECK(ya == yb);

    GaussianSampler c(derive_seed(99, 0));
    ChannelParams quiet = ChannelParams::from_snr_db(400.0);
    auto yq = awgn(levels, quiet, c);
    for (size_t i = 0; i < levels.size(); ++i)
        CHECK(yq[i] == Catch::Approx(levels[i]).margin(1e-12));
}

TEST_CASE("awgn: sample moments over 1e6 draws", "[pam4]") {
    const double sigma = 0.7;
    ChannelParams ch = ChannelParams::from_sigma(sigma);
    GaussianSampler rng(derive_seed(2024, 1));
    const int n = 1000000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        double z = ch.sigma * rng();
        sum += z;
        sumsq += z * z;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.01 * sigma);
    CHECK(std::fabs(var - sigma * sigma) < 0.01 * sigma * sigma);
}

TEST_CASE("bit LLRs: symmetry, asymptotics, oracle", "[pam4]") {
    ChannelParams ch = ChannelParams::from_sigma(1.0);

    CHECK(bit_llrs(0.0, ch, Labeling::Gray).msb == Catch::Approx(0.0).margin(1e-12));
    CHECK(bit_llrs(+50.0, ch, Labeling::Natural).msb < -100.0);  // MSB=1 favored far right

    for (double y : {-4.2, -1.3, 0.0, 0.77, 1.0, 2.9, 5.5}) {
        for (auto lab : {Labeling::Gray, Labeling::Natural}) {
            BitLlrs fast = bit_llrs(y, ch, lab);
            BitLlrs slow = naive_llrs(y, 1.0, lab);
            CHECK(fast.msb == Catch::Approx(slow.msb).epsilon(1e-12).margin(1e-300));
            CHECK(fast.lsb == Catch::Approx(slow.lsb).epsilon(1e-12).margin(1e-300));
        }
    }

    // Gray LSB pattern 0,1,1,0 is symmetric, so llr_lsb is even in y
    for (double y = -6.0; y <= 6.0; y += 0.05) {
        double d = bit_llrs(y, ch, Labeling::Gray).lsb - bit_llrs(-y, ch, Labeling::Gray).lsb;
        REQUIRE(std::fabs(d) < 1e-9);
    }

    // outside the constellation the LLR signs match the nearest-level bits
    for (double y : {3.05, 4.0, 7.5, -3.05, -4.0, -7.5}) {
        for (auto lab : {Labeling::Gray, Labeling::Natural}) {
            BitLlrs llr = bit_llrs(y, ch, lab);
            auto [msb, lsb] = level_bits(level_index(nearest_level(y)), lab);
            CHECK(hard_bit(llr.msb) == msb);
            CHECK(hard_bit(llr.lsb) == lsb);
        }
    }
}

TEST_CASE("conditional MSB demapping", "[pam4]") {
    CHECK(conditional_msb(+0.9, 1, Labeling::Natural) == 0);  // -1 nearer than +3
    CHECK(conditional_msb(+0.9, 0, Labeling::Natural) == 1);  // +1 nearer than -3
    CHECK(conditional_msb(-10.0, 0, Labeling::Natural) == 0);
    CHECK(conditional_msb(-10.0, 1, Labeling::Natural) == 0);
    CHECK_THROWS_AS(conditional_msb(0.0, 0, Labeling::Gray), ConfigError);

    // correct whenever |noise| < 1 (half the adjacent-level distance)
    for (int msb = 0; msb < 2; ++msb)
        for (int lsb = 0; lsb < 2; ++lsb) {
            double s = map_bits(msb, lsb, Labeling::Natural);
            for (double noise = -0.999; noise <= 0.999; noise += 0.037)
                REQUIRE(conditional_msb(s + noise, lsb, Labeling::Natural) == msb);
        }
}

TEST_CASE("raw LSB BER and symbol error rate against Monte Carlo", "[pam4]") {
    ChannelParams quiet = ChannelParams::from_sigma(1e-6);
    CHECK(raw_lsb_ber(quiet, Labeling::Natural) == Catch::Approx(0.0).margin(1e-30));

    ChannelParams ch = ChannelParams::from_sigma(1.0);
    const long trials = 10000000;
    GaussianSampler rng(derive_seed(555, 0));
    long lsb_err_nat = 0, lsb_err_gray = 0, sym_err = 0;
    for (long i = 0; i < trials; ++i) {
        int idx = static_cast<int>(rng.bits()() & 3);
        double s = -3.0 + 2.0 * idx;
        double y = s + ch.sigma * rng();
        double shat = nearest_level(y);
        if (shat != s) ++sym_err;
        if (level_bits(level_index(shat), Labeling::Natural).second !=
            level_bits(idx, Labeling::Natural).second)
            ++lsb_err_nat;
        if (level_bits(level_index(shat), Labeling::Gray).second !=
            level_bits(idx, Labeling::Gray).second)
            ++lsb_err_gray;
    }
    auto within_3se = [&](double p_hat, double p) {
        double se = std::sqrt(p * (1 - p) / trials);
        return std::fabs(p_hat - p) <= 3 * se;
    };
    CHECK(within_3se(static_cast<double>(lsb_err_nat) / trials,
                     raw_lsb_ber(ch, Labeling::Natural)));
    CHECK(within_3se(static_cast<double>(lsb_err_gray) / trials,
                     raw_lsb_ber(ch, Labeling::Gray)));
    CHECK(within_3se(static_cast<double>(sym_err) / trials, raw_symbol_error_rate(ch)));
}
