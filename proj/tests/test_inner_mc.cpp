#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fecpareto/inner_mc.hpp"

using namespace fecpareto;

namespace {

SchemeConfig mlc_config(int b, int t, int n, int J) {
    SchemeConfig cfg;
    cfg.scheme = Scheme::MLC;
    cfg.spec = design_bch(b, t, n);
    cfg.J = J;
    return cfg;
}

SchemeConfig bicm_config(int b, int t, int n, int J) {
    SchemeConfig cfg;
    cfg.scheme = Scheme::BICM;
    cfg.spec = design_bch(b, t, n);
    cfg.J = J;
    return cfg;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
        std::filesystem::remove(path);
    }
    ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_CASE("divisibility constraints", "[inner_mc]") {
    CHECK_THROWS_AS(validate_config(bicm_config(5, 1, 32, 2)), ConfigError);  // k=26, 10 does not divide
    CHECK_NOTHROW(validate_config(bicm_config(5, 1, 26, 2)));                 // k=20
    CHECK_THROWS_AS(validate_config(mlc_config(6, 1, 56, 2)), ConfigError);   // k=49, 5 does not divide
    CHECK_NOTHROW(validate_config(mlc_config(6, 1, 57, 2)));                  // k=50
}

TEST_CASE("noiseless limit concentrates at U=0 and pmf is normalized", "[inner_mc]") {
    SimOptions opt;
    opt.trials = 20000;
    opt.master_seed = 7;
    opt.workers = 2;
    UDistribution d = simulate_u(mlc_config(6, 1, 57, 2), 40.0, opt);
    CHECK(d.pr_zero() > 0.9999);
    CHECK(static_cast<int>(d.pmf.size()) == 51);
    double sum = 0;
    for (double p : d.pmf) sum += p;
    CHECK(sum == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("decoder bypass matches the closed-form raw symbol error rate", "[inner_mc]") {
    SimOptions opt;
    opt.trials = 300000;
    opt.master_seed = 11;
    opt.workers = 2;
    opt.bypass_decoder = true;
    const double snr = 13.0;
    SchemeConfig cfg = bicm_config(5, 1, 26, 0);
    UDistribution d = simulate_u(cfg, snr, opt);
    const double p = raw_symbol_error_rate(ChannelParams::from_snr_db(snr));
    const double umax = cfg.u_max();
    const double se = std::sqrt(p * (1 - p) / (opt.trials * umax));
    CHECK(std::fabs(d.mean() / umax - p) <= 3 * se);
}

TEST_CASE("worker-count independence", "[inner_mc]") {
    SchemeConfig cfg = mlc_config(5, 1, 26, 2);
    SimOptions a;
    a.trials = 40000;
    a.master_seed = 99;
    a.workers = 1;
    SimOptions b = a;
    b.workers = 3;
    UDistribution da = simulate_u(cfg, 15.0, a);
    UDistribution db = simulate_u(cfg, 15.0, b);
    CHECK(da.pmf == db.pmf);  // bitwise identical
}

TEST_CASE("E[U] is non-increasing in SNR", "[inner_mc]") {
    SchemeConfig cfg = mlc_config(5, 1, 26, 2);
    SimOptions opt;
    opt.trials = 60000;
    opt.master_seed = 3;
    opt.workers = 2;
    double prev = 1e9;
    for (double snr : {13.0, 14.0, 15.0, 16.0}) {
        UDistribution d = simulate_u(cfg, snr, opt);
        double mean = d.mean();
        double se = 3.0 * std::sqrt(static_cast<double>(cfg.u_max())) /
                    std::sqrt(static_cast<double>(opt.trials));
        REQUIRE(mean <= prev + se);
        prev = mean;
    }
}

TEST_CASE("stopping rule keeps simulating until enough error events", "[inner_mc]") {
    SchemeConfig cfg = mlc_config(5, 1, 26, 1);
    SimOptions opt;
    opt.trials = 1000;
    opt.master_seed = 21;
    opt.workers = 2;
    opt.min_events = 50;
    opt.max_trials = 2000000;
    UDistribution d = simulate_u(cfg, 16.5, opt);
    uint64_t events = d.trials - std::llround(d.pr_zero() * static_cast<double>(d.trials));
    CHECK(d.trials >= 1000);
    CHECK((events >= 50 || d.trials == opt.max_trials));
}

TEST_CASE("cache round-trip, merge rule, missing keys", "[inner_mc]") {
    TempFile tmp("fecpareto_test_cache.jsonl");
    SchemeConfig cfg = mlc_config(5, 1, 26, 2);
    SimOptions opt;
    opt.trials = 5000;
    opt.master_seed = 5;
    UDistribution d = simulate_u(cfg, 15.0, opt);
    {
        UCache cache(tmp.path);
        CHECK(cache.store(d));
        cache.save();
    }
    {
        UCache cache(tmp.path);
        auto hit = cache.lookup(cfg, 15.0);
        REQUIRE(hit.has_value());
        CHECK(hit->pmf == d.pmf);  // bit-for-bit
        CHECK(hit->trials == d.trials);
        CHECK_FALSE(cache.lookup(cfg, 15.5).has_value());

        // same key, more trials wins; fewer trials is ignored
        opt.trials = 8000;
        UDistribution bigger = simulate_u(cfg, 15.0, opt);
        CHECK(cache.store(bigger));
        opt.trials = 1000;
        CHECK_FALSE(cache.store(simulate_u(cfg, 15.0, opt)));
        cache.save();
    }
    {
        UCache cache(tmp.path);
        CHECK(cache.lookup(cfg, 15.0)->trials == 8000);
    }
}

TEST_CASE("corrupt cache reports the offending record", "[inner_mc]") {
    TempFile tmp("fecpareto_corrupt_cache.jsonl");
    {
        std::ofstream out(tmp.path);
        out << "{\"format_version\":1}\n";
        out << "this is not json\n";
    }
    try {
        UCache cache(tmp.path);
        FAIL("expected CacheError");
    } catch (const CacheError& e) {
        CHECK(e.record == 1);
    }
}

TEST_CASE("provider reports missing keys without a budget and fills them with one",
          "[inner_mc]") {
    SchemeConfig cfg = mlc_config(5, 1, 26, 2);
    UProvider dry(UProvider::Budget{0, 1, 1, 0, 0});
    CHECK_THROWS_AS(dry.get(cfg, 15.0), NeedsSimulation);

    UProvider wet(UProvider::Budget{2000, 1, 2, 0, 0});
    UDistribution d = wet.get(cfg, 15.0);
    CHECK(d.trials == 2000);
    CHECK(wet.simulated() == 1);
    wet.get(cfg, 15.0);
    CHECK(wet.hits() == 1);
    CHECK(wet.simulated() == 1);
}
