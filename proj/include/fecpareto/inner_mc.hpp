#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "fecpareto/bch.hpp"
#include "fecpareto/errors.hpp"
#include "fecpareto/pam4.hpp"
#include "fecpareto/rng.hpp"

namespace fecpareto {

// One inner-decoder operating point: coded-modulation scheme, BCH code and
// Chase test-bit count. B enters only through the divisibility constraints
// that make the symbol-wise interleaving line up.
struct SchemeConfig {
    Scheme scheme = Scheme::MLC;
    BchSpec spec;
    int J = 0;
    int B = 10;

    int u_max() const { return scheme == Scheme::BICM ? spec.k / 2 : spec.k; }
    int info_symbols() const { return u_max(); }
};

inline void validate_config(const SchemeConfig& cfg) {
    if (cfg.J < 0 || cfg.J > 6) throw ConfigError("J must be in 0..6");
    if (cfg.B <= 0 || cfg.B % 2 != 0) throw ConfigError("B must be a positive even integer");
    if (cfg.scheme == Scheme::BICM && cfg.spec.k % cfg.B != 0)
        throw ConfigError("BICM requires B | k (B=" + std::to_string(cfg.B) +
                          ", k=" + std::to_string(cfg.spec.k) + ")");
    if (cfg.scheme == Scheme::MLC && cfg.spec.k % (cfg.B / 2) != 0)
        throw ConfigError("MLC requires B/2 | k (B=" + std::to_string(cfg.B) +
                          ", k=" + std::to_string(cfg.spec.k) + ")");
}

// Empirical pmf of the PAM4-symbol-error weight U at the inner decoder output.
struct UDistribution {
    Scheme scheme = Scheme::MLC;
    int b = 0, t = 0, n = 0, k = 0, J = 0;
    double snr_db = 0.0;
    uint64_t trials = 0;
    uint64_t seed = 0;
    std::vector<double> pmf;  // support 0..u_max

    double mean() const {
        double m = 0.0;
        for (size_t u = 0; u < pmf.size(); ++u) m += static_cast<double>(u) * pmf[u];
        return m;
    }
    double pr_zero() const { return pmf.empty() ? 0.0 : pmf[0]; }
};

namespace detail {

struct InnerScratch {
    std::vector<uint8_t> data_bits;   // BICM: k info bits; MLC: k MSBs
    std::vector<uint8_t> lsb_bits;    // MLC only
    std::vector<uint8_t> codeword;
    std::vector<double> levels;
    std::vector<double> received;
    SoftWord soft;
    std::vector<uint8_t> decoded;
};

inline uint8_t draw_bit(Xoshiro256pp& rng) { return static_cast<uint8_t>(rng() >> 63); }

// Transmits one inner codeword and marks which of the information PAM4
// symbols come out wrong. Returns the error count U. With `bypass_decoder`
// the Chase stage is skipped and the raw hard decisions are used (test hook).
inline int simulate_word(const SchemeConfig& cfg, const ChannelParams& ch, GaussianSampler& rng,
                         InnerScratch& ws, bool bypass_decoder,
                         std::vector<uint8_t>* symbol_errors = nullptr) {
    const BchSpec& spec = cfg.spec;
    const int n = spec.n, k = spec.k;

    if (cfg.scheme == Scheme::BICM) {
        ws.data_bits.resize(k);
        for (int i = 0; i < k; ++i) ws.data_bits[i] = draw_bit(rng.bits());
        ws.codeword = encode(spec, ws.data_bits);

        const int nsym = (n + 1) / 2;
        ws.levels.resize(nsym);
        for (int s = 0; s < nsym; ++s) {
            int msb = ws.codeword[2 * s];
            int lsb = (2 * s + 1 < n) ? ws.codeword[2 * s + 1] : 0;  // known zero pad
            ws.levels[s] = map_bits(msb, lsb, Labeling::Gray);
        }
        ws.received.resize(nsym);
        awgn(ws.levels, ch, rng, ws.received);

        ws.soft.hard_bits.resize(n);
        ws.soft.reliabilities.resize(n);
        for (int s = 0; s < nsym; ++s) {
            BitLlrs llr = bit_llrs(ws.received[s], ch, Labeling::Gray);
            ws.soft.hard_bits[2 * s] = hard_bit(llr.msb);
            ws.soft.reliabilities[2 * s] = std::fabs(llr.msb);
            if (2 * s + 1 < n) {
                ws.soft.hard_bits[2 * s + 1] = hard_bit(llr.lsb);
                ws.soft.reliabilities[2 * s + 1] = std::fabs(llr.lsb);
            }
        }
        ws.decoded = bypass_decoder ? ws.soft.hard_bits : chase_decode(spec, ws.soft, cfg.J);

        const int info_syms = k / 2;
        if (symbol_errors) symbol_errors->assign(info_syms, 0);
        int u = 0;
        for (int s = 0; s < info_syms; ++s) {
            bool err = ws.decoded[2 * s] != ws.codeword[2 * s] ||
                       ws.decoded[2 * s + 1] != ws.codeword[2 * s + 1];
            if (err) {
                ++u;
                if (symbol_errors) (*symbol_errors)[s] = 1;
            }
        }
        return u;
    }

    // MLC: LSBs are inner-coded and ride natural-labeled information symbols;
    // parity bits ride extra Gray-labeled symbols.
    ws.data_bits.resize(k);
    ws.lsb_bits.resize(k);
    for (int i = 0; i < k; ++i) {
        ws.data_bits[i] = draw_bit(rng.bits());  // MSB
        ws.lsb_bits[i] = draw_bit(rng.bits());
    }
    ws.codeword = encode(spec, ws.lsb_bits);

    const int npar_bits = n - k;
    const int npar_sym = (npar_bits + 1) / 2;
    ws.levels.resize(k + npar_sym);
    for (int i = 0; i < k; ++i)
        ws.levels[i] = map_bits(ws.data_bits[i], ws.lsb_bits[i], Labeling::Natural);
    for (int p = 0; p < npar_sym; ++p) {
        int msb = ws.codeword[k + 2 * p];
        int lsb = (k + 2 * p + 1 < n) ? ws.codeword[k + 2 * p + 1] : 0;
        ws.levels[k + p] = map_bits(msb, lsb, Labeling::Gray);
    }
    ws.received.resize(k + npar_sym);
    awgn(ws.levels, ch, rng, ws.received);

    ws.soft.hard_bits.resize(n);
    ws.soft.reliabilities.resize(n);
    for (int i = 0; i < k; ++i) {
        BitLlrs llr = bit_llrs(ws.received[i], ch, Labeling::Natural);
        ws.soft.hard_bits[i] = hard_bit(llr.lsb);
        ws.soft.reliabilities[i] = std::fabs(llr.lsb);
    }
    for (int p = 0; p < npar_sym; ++p) {
        BitLlrs llr = bit_llrs(ws.received[k + p], ch, Labeling::Gray);
        ws.soft.hard_bits[k + 2 * p] = hard_bit(llr.msb);
        ws.soft.reliabilities[k + 2 * p] = std::fabs(llr.msb);
        if (k + 2 * p + 1 < n) {
            ws.soft.hard_bits[k + 2 * p + 1] = hard_bit(llr.lsb);
            ws.soft.reliabilities[k + 2 * p + 1] = std::fabs(llr.lsb);
        }
    }
    ws.decoded = bypass_decoder ? ws.soft.hard_bits : chase_decode(spec, ws.soft, cfg.J);

    if (symbol_errors) symbol_errors->assign(k, 0);
    int u = 0;
    for (int i = 0; i < k; ++i) {
        int dec_lsb = ws.decoded[i];
        int dec_msb = conditional_msb(ws.received[i], dec_lsb, Labeling::Natural);
        bool err = dec_lsb != ws.lsb_bits[i] || dec_msb != ws.data_bits[i];
        if (err) {
            ++u;
            if (symbol_errors) (*symbol_errors)[i] = 1;
        }
    }
    return u;
}

} // namespace detail

struct SimOptions {
    uint64_t trials = 1000000;
    uint64_t master_seed = 1;
    int workers = 1;
    bool bypass_decoder = false;  // test hook
    // optional stopping rule: after `trials`, keep simulating whole chunks
    // until at least min_events trials had U > 0 or max_trials is reached
    uint64_t min_events = 0;
    uint64_t max_trials = 0;
    static constexpr uint64_t kChunk = 1 << 16;
};

// Monte-Carlo estimate of the pmf of U. Deterministic given master_seed and
// the trial budget, independent of the worker count: trial i always draws from
// the stream seeded by derive_seed(master_seed, i).
inline UDistribution simulate_u(const SchemeConfig& cfg, double snr_db, const SimOptions& opt) {
    validate_config(cfg);
    if (opt.trials < 1) throw ConfigError("simulate_u: trials must be >= 1");
    const ChannelParams ch = ChannelParams::from_snr_db(snr_db);
    const int umax = cfg.u_max();
    std::vector<uint64_t> hist(umax + 1, 0);

    const int workers = std::max(1, opt.workers);
    auto run_block = [&](uint64_t first, uint64_t count) {
        std::vector<std::thread> threads;
        std::vector<std::vector<uint64_t>> local(workers, std::vector<uint64_t>(umax + 1, 0));
        uint64_t per = count / workers, rem = count % workers;
        uint64_t start = first;
        for (int w = 0; w < workers; ++w) {
            uint64_t cnt = per + (static_cast<uint64_t>(w) < rem ? 1 : 0);
            threads.emplace_back([&, w, start, cnt] {
                detail::InnerScratch ws;
                for (uint64_t i = start; i < start + cnt; ++i) {
                    GaussianSampler rng(derive_seed(opt.master_seed, i));
                    int u = detail::simulate_word(cfg, ch, rng, ws, opt.bypass_decoder);
                    ++local[w][u];
                }
            });
            start += cnt;
        }
        for (auto& th : threads) th.join();
        for (int w = 0; w < workers; ++w)
            for (int u = 0; u <= umax; ++u) hist[u] += local[w][u];
    };

    uint64_t done = 0;
    run_block(0, opt.trials);
    done = opt.trials;
    if (opt.min_events > 0) {
        uint64_t cap = std::max(opt.max_trials, opt.trials);
        auto events = [&] { return done - hist[0]; };
        while (events() < opt.min_events && done < cap) {
            uint64_t chunk = std::min(SimOptions::kChunk, cap - done);
            run_block(done, chunk);
            done += chunk;
        }
    }

    UDistribution dist;
    dist.scheme = cfg.scheme;
    dist.b = cfg.spec.b();
    dist.t = cfg.spec.t;
    dist.n = cfg.spec.n;
    dist.k = cfg.spec.k;
    dist.J = cfg.J;
    dist.snr_db = snr_db;
    dist.trials = done;
    dist.seed = opt.master_seed;
    dist.pmf.resize(umax + 1);
    for (int u = 0; u <= umax; ++u)
        dist.pmf[u] = static_cast<double>(hist[u]) / static_cast<double>(done);
    return dist;
}

// ---------------------------------------------------------------------------
// Persistent cache of U distributions: one JSON object per line, preceded by a
// header line carrying the format version. Records are keyed by
// (scheme, b, t, n, k, J, snr rounded to 1e-4 dB); on key collision the record
// with more trials wins.

struct UCacheKey {
    int scheme = 0;
    int b = 0, t = 0, n = 0, k = 0, J = 0;
    int64_t snr_e4 = 0;

    auto tie() const { return std::tie(scheme, b, t, n, k, J, snr_e4); }
    bool operator<(const UCacheKey& o) const { return tie() < o.tie(); }

    static UCacheKey of(Scheme s, int b, int t, int n, int k, int J, double snr_db) {
        UCacheKey key;
        key.scheme = s == Scheme::BICM ? 0 : 1;
        key.b = b; key.t = t; key.n = n; key.k = k; key.J = J;
        key.snr_e4 = std::llround(snr_db * 1e4);
        return key;
    }
    static UCacheKey of(const UDistribution& d) {
        return of(d.scheme, d.b, d.t, d.n, d.k, d.J, d.snr_db);
    }
    static UCacheKey of(const SchemeConfig& cfg, double snr_db) {
        return of(cfg.scheme, cfg.spec.b(), cfg.spec.t, cfg.spec.n, cfg.spec.k, cfg.J, snr_db);
    }

    std::string describe() const {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s b=%d t=%d n=%d k=%d J=%d snr=%.4f",
                      scheme == 0 ? "bicm" : "mlc", b, t, n, k, J,
                      static_cast<double>(snr_e4) / 1e4);
        return buf;
    }
};

class UCache {
public:
    UCache() = default;
    explicit UCache(std::string path) : path_(std::move(path)) { load(); }

    const std::string& path() const { return path_; }
    size_t size() const { return records_.size(); }

    std::optional<UDistribution> lookup(const SchemeConfig& cfg, double snr_db) const {
        auto it = records_.find(UCacheKey::of(cfg, snr_db));
        if (it == records_.end()) return std::nullopt;
        return it->second;
    }

    // merge rule: higher trial count wins, equal counts keep the resident one
    bool store(const UDistribution& dist) {
        auto key = UCacheKey::of(dist);
        auto it = records_.find(key);
        if (it != records_.end() && it->second.trials >= dist.trials) return false;
        records_[key] = dist;
        return true;
    }

    void save() const {
        if (path_.empty()) return;
        std::string tmp = path_ + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw ComputeError("cannot write cache file " + tmp);
            out << "{\"format_version\":1}\n";
            for (const auto& [key, d] : records_) {
                nlohmann::json j;
                j["scheme"] = d.scheme == Scheme::BICM ? "bicm" : "mlc";
                j["b"] = d.b; j["t"] = d.t; j["n"] = d.n; j["k"] = d.k; j["J"] = d.J;
                j["snr_db"] = d.snr_db;
                j["trials"] = d.trials;
                j["seed"] = d.seed;
                j["pmf"] = d.pmf;
                out << j.dump() << "\n";
            }
        }
        std::filesystem::rename(tmp, path_);
    }

private:
    void load() {
        std::ifstream in(path_);
        if (!in) return;  // a missing cache file is an empty cache
        std::string line;
        long index = 0;
        if (!std::getline(in, line)) return;
        try {
            auto header = nlohmann::json::parse(line);
            if (header.at("format_version").get<int>() != 1)
                throw CacheError("unsupported cache format_version", 0);
        } catch (const nlohmann::json::exception& e) {
            throw CacheError(std::string("corrupt cache header: ") + e.what(), 0);
        }
        while (std::getline(in, line)) {
            ++index;
            if (line.empty()) continue;
            try {
                auto j = nlohmann::json::parse(line);
                UDistribution d;
                d.scheme = j.at("scheme").get<std::string>() == "bicm" ? Scheme::BICM : Scheme::MLC;
                d.b = j.at("b").get<int>();
                d.t = j.at("t").get<int>();
                d.n = j.at("n").get<int>();
                d.k = j.at("k").get<int>();
                d.J = j.at("J").get<int>();
                d.snr_db = j.at("snr_db").get<double>();
                d.trials = j.at("trials").get<uint64_t>();
                d.seed = j.at("seed").get<uint64_t>();
                d.pmf = j.at("pmf").get<std::vector<double>>();
                store(d);
            } catch (const nlohmann::json::exception& e) {
                throw CacheError("corrupt cache record " + std::to_string(index) + ": " + e.what(),
                                 index);
            }
        }
    }

    std::string path_;
    std::map<UCacheKey, UDistribution> records_;
};

// Cache-backed source of U distributions shared by FER evaluation and the
// code search. With a simulation budget it fills misses on the fly; without
// one it reports the missing keys so the caller can run inner-sim.
class UProvider {
public:
    struct Budget {
        uint64_t trials = 0;  // 0 = simulation not allowed
        uint64_t master_seed = 1;
        int workers = 1;
        uint64_t min_events = 0;
        uint64_t max_trials = 0;
    };

    UProvider(std::string cache_path, Budget budget)
        : cache_(std::move(cache_path)), budget_(budget) {}
    explicit UProvider(Budget budget) : cache_(), budget_(budget) {}

    UDistribution get(const SchemeConfig& cfg, double snr_db) {
        std::lock_guard<std::mutex> lock(mu_);
        if (auto hit = cache_.lookup(cfg, snr_db)) {
            ++hits_;
            return *hit;
        }
        ++misses_;
        if (budget_.trials == 0) {
            auto key = UCacheKey::of(cfg, snr_db);
            throw NeedsSimulation("missing U distribution: " + key.describe(),
                                  {key.describe()});
        }
        SimOptions opt;
        opt.trials = budget_.trials;
        opt.master_seed = budget_.master_seed;
        opt.workers = budget_.workers;
        opt.min_events = budget_.min_events;
        opt.max_trials = budget_.max_trials;
        UDistribution dist = simulate_u(cfg, snr_db, opt);
        ++simulated_;
        cache_.store(dist);
        if (!cache_.path().empty()) cache_.save();
        return dist;
    }

    uint64_t hits() const { return hits_; }
    uint64_t misses() const { return misses_; }
    uint64_t simulated() const { return simulated_; }
    UCache& cache() { return cache_; }

private:
    UCache cache_;
    Budget budget_;
    uint64_t hits_ = 0, misses_ = 0, simulated_ = 0;
    std::mutex mu_;
};

} // namespace fecpareto
