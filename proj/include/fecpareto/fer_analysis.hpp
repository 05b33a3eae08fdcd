#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fecpareto/cost_model.hpp"
#include "fecpareto/errors.hpp"
#include "fecpareto/inner_mc.hpp"
#include "fecpareto/pam4.hpp"

namespace fecpareto {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

// Coefficient of x^u y^v in W_{Bp,kp,L}(x,y) = (1 + ((1+x)^Bp - 1) y)^L (1+x)^(kp - Bp L):
// the number of weight-u PAM4-symbol-error patterns on kp symbols that corrupt
// exactly v of the L RS symbols in the strip. Closed form by expanding
// ((1+x)^Bp - 1)^v with inclusion-exclusion; exact integer arithmetic.
inline BigInt genfunc_coeff(int Bp, int kp, int L, int u, int v) {
    if (Bp < 1 || L < 0 || static_cast<long>(Bp) * L > kp)
        throw ConfigError("genfunc_coeff: need Bp >= 1 and Bp*L <= kp");
    if (u < 0 || u > kp || v < 0 || v > L)
        throw ConfigError("genfunc_coeff: (u,v) out of range");
    BigInt inner = 0;
    const long rest = static_cast<long>(kp) - static_cast<long>(Bp) * L;
    for (int i = 0; i <= v; ++i) {
        BigInt term = big_binomial(v, i) * big_binomial(static_cast<long>(Bp) * (v - i) + rest, u);
        if (i % 2 == 0)
            inner += term;
        else
            inner -= term;
    }
    return big_binomial(L, v) * inner;
}

// Pr(V = v | U = u) for a strip of L RS symbols inside kp information PAM4
// symbols, Bp = B/2 symbols per RS symbol.
struct StripConditional {
    int Bp = 0, kp = 0, L = 0;
    std::vector<std::vector<double>> table;  // (kp+1) x (L+1)
};

inline StripConditional strip_conditional(int Bp, int kp, int L) {
    StripConditional c;
    c.Bp = Bp;
    c.kp = kp;
    c.L = L;
    c.table.assign(kp + 1, std::vector<double>(L + 1, 0.0));
    BigInt denom = 1;  // C(kp, u), updated incrementally
    for (int u = 0; u <= kp; ++u) {
        if (u > 0) {
            denom *= (kp - u + 1);
            denom /= u;
        }
        for (int v = 0; v <= L; ++v) {
            if (v > std::min(u, L)) continue;
            BigInt num = genfunc_coeff(Bp, kp, L, u, v);
            if (num == 0) continue;
            // exact integer ratio, converted to floating point last
            c.table[u][v] =
                boost::multiprecision::cpp_rational(num, denom).convert_to<double>();
        }
    }
    return c;
}

struct Pmf {
    std::vector<double> p;

    double tail_above(long T) const {
        double s = 0.0;
        for (size_t i = static_cast<size_t>(std::max(0l, T + 1)); i < p.size(); ++i) s += p[i];
        return s;
    }
    double sum() const {
        double s = 0.0;
        for (double x : p) s += x;
        return s;
    }
};

// law of total probability: Pr(V=v) = sum_u Pr(V=v | U=u) Pr(U=u)
inline Pmf v_distribution(const StripConditional& cond, const UDistribution& u_dist) {
    if (static_cast<int>(u_dist.pmf.size()) != cond.kp + 1)
        throw ConfigError("v_distribution: U support length " +
                          std::to_string(u_dist.pmf.size()) + " != kp+1 = " +
                          std::to_string(cond.kp + 1));
    Pmf out;
    out.p.assign(cond.L + 1, 0.0);
    for (int u = 0; u <= cond.kp; ++u) {
        double pu = u_dist.pmf[u];
        if (pu == 0.0) continue;
        for (int v = 0; v <= cond.L; ++v) out.p[v] += pu * cond.table[u][v];
    }
    return out;
}

inline Pmf convolve(const Pmf& a, const Pmf& b, long cap) {
    Pmf out;
    size_t len = std::min(a.p.size() + b.p.size() - 1, static_cast<size_t>(cap) + 1);
    out.p.assign(len, 0.0);
    for (size_t i = 0; i < a.p.size() && i < len; ++i) {
        if (a.p[i] == 0.0) continue;
        for (size_t j = 0; j < b.p.size() && i + j < len; ++j)
            out.p[i + j] += a.p[i] * b.p[j];
    }
    return out;
}

inline Pmf conv_power(Pmf base, long e, long cap) {
    Pmf result;
    result.p = {1.0};
    while (e > 0) {
        if (e & 1) result = convolve(result, base, cap);
        e >>= 1;
        if (e > 0) base = convolve(base, base, cap);
    }
    return result;
}

// Y = sum of the strip contributions; convolution power per multiplicity.
inline Pmf y_distribution(const std::vector<std::pair<Pmf, long>>& strips, long cap) {
    Pmf y;
    y.p = {1.0};
    for (const auto& [pmf, mult] : strips) {
        if (mult < 1) throw ConfigError("y_distribution: multiplicity must be >= 1");
        y = convolve(y, conv_power(pmf, mult, cap), cap);
    }
    return y;
}

struct FerValue {
    double raw = 0.0;      // union-bound sum, may exceed 1
    double clipped = 0.0;  // min(1, raw)
};

inline FerValue frame_error_prob(const std::vector<Pmf>& y_dists, int T) {
    FerValue f;
    for (const auto& y : y_dists) f.raw += y.tail_above(T);
    f.clipped = std::min(1.0, f.raw);
    return f;
}

// ---------------------------------------------------------------------------
// Geometry-level evaluation

// Precomputed strip conditionals for one geometry; they depend on (Bp, kp, L)
// only, so they are shared across SNR points.
struct GeometryAnalysis {
    FrameGeometry geom;
    int Bp = 0, kp = 0;
    std::map<int, StripConditional> by_length;
};

inline GeometryAnalysis prepare_analysis(const FrameGeometry& geom) {
    GeometryAnalysis a;
    a.geom = geom;
    a.Bp = geom.outer.B / 2;
    a.kp = geom.scheme == Scheme::BICM ? geom.inner.k / 2 : geom.inner.k;
    for (const auto& fam : geom.families)
        for (const auto& [L, count] : fam.strips)
            if (!a.by_length.count(L)) a.by_length.emplace(L, strip_conditional(a.Bp, a.kp, L));
    return a;
}

inline FerValue fer_point(const GeometryAnalysis& a, const UDistribution& u_dist) {
    FerValue f;
    for (const auto& fam : a.geom.families) {
        std::vector<std::pair<Pmf, long>> strips;
        for (const auto& [L, count] : fam.strips)
            strips.push_back({v_distribution(a.by_length.at(L), u_dist), count});
        Pmf y = y_distribution(strips, a.geom.outer.N);
        f.raw += fam.words * y.tail_above(a.geom.outer.T);
    }
    f.clipped = std::min(1.0, f.raw);
    return f;
}

inline SchemeConfig scheme_config_for(const FrameGeometry& geom, int J) {
    SchemeConfig cfg;
    cfg.scheme = geom.scheme;
    cfg.spec = design_bch(geom.inner.b, geom.inner.t, geom.inner.n);
    cfg.J = J;
    cfg.B = geom.outer.B;
    return cfg;
}

struct CurvePoint {
    double snr_db = 0.0;
    double fer_raw = 0.0;
    double fer_clipped = 0.0;
};

inline std::vector<CurvePoint> fer_curve(const FrameGeometry& geom, int J,
                                         const std::vector<double>& snr_grid,
                                         UProvider& provider) {
    GeometryAnalysis a = prepare_analysis(geom);
    SchemeConfig cfg = scheme_config_for(geom, J);
    std::vector<CurvePoint> curve;
    for (double snr : snr_grid) {
        UDistribution d = provider.get(cfg, snr);
        FerValue f = fer_point(a, d);
        curve.push_back({snr, f.raw, f.clipped});
    }
    return curve;
}

// log-linear interpolation of the FER-vs-SNR curve at `target`
inline double snr_at_fer(const std::vector<CurvePoint>& curve, double target = 1e-13) {
    if (curve.size() < 2) throw ComputeError("snr_at_fer: need at least two curve points");
    std::vector<CurvePoint> pts = curve;
    std::sort(pts.begin(), pts.end(),
              [](const CurvePoint& x, const CurvePoint& y) { return x.snr_db < y.snr_db; });
    const double lt = std::log10(target);
    auto logfer = [](double f) { return std::log10(std::max(f, 1e-300)); };
    for (const auto& p : pts)
        if (p.fer_clipped == target) return p.snr_db;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double l0 = logfer(pts[i].fer_clipped), l1 = logfer(pts[i + 1].fer_clipped);
        if ((l0 - lt) * (l1 - lt) < 0) {
            return pts[i].snr_db + (pts[i + 1].snr_db - pts[i].snr_db) * (lt - l0) / (l1 - l0);
        }
    }
    throw ComputeError("snr_at_fer: target FER not bracketed by the curve");
}

// ---------------------------------------------------------------------------
// Constrained Shannon limit

namespace detail {

// physicists' Gauss-Hermite rule: integral of exp(-x^2) f(x) dx
inline void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    constexpr double kPim4 = 0.7511255444649425;  // pi^(-1/4)
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * x[1];
        else
            z = 2.0 * z - x[i - 2];
        for (int iter = 0; iter < 60; ++iter) {
            double p1 = kPim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-14 * std::max(1.0, std::fabs(z))) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
}

inline const std::pair<std::vector<double>, std::vector<double>>& gh_rule() {
    static const auto rule = [] {
        std::pair<std::vector<double>, std::vector<double>> r;
        gauss_hermite(96, r.first, r.second);
        return r;
    }();
    return rule;
}

} // namespace detail

// Mutual information of equiprobable PAM4 over AWGN in bits per symbol,
// evaluated with a 96-node Gauss-Hermite rule per level (absolute accuracy
// well below 1e-6 bits).
inline double pam4_capacity(double snr_db) {
    const ChannelParams ch = ChannelParams::from_snr_db(snr_db);
    const double sigma = ch.sigma;
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    const auto& [nodes, weights] = detail::gh_rule();
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    const double inv_ln2 = 1.0 / std::numbers::ln2;

    double expected = 0.0;
    for (int xi = 0; xi < 4; ++xi) {
        const double x = -3.0 + 2.0 * xi;
        double acc = 0.0;
        for (size_t i = 0; i < nodes.size(); ++i) {
            const double z = std::sqrt(2.0) * sigma * nodes[i];
            double a[4], amax = -1e300;
            for (int si = 0; si < 4; ++si) {
                const double s = -3.0 + 2.0 * si;
                a[si] = (z * z - (x + z - s) * (x + z - s)) * inv2s2;
                amax = std::max(amax, a[si]);
            }
            double sum = 0.0;
            for (int si = 0; si < 4; ++si) sum += std::exp(a[si] - amax);
            acc += weights[i] * (amax + std::log(sum)) * inv_ln2;
        }
        expected += acc * inv_sqrt_pi;
    }
    return 2.0 - expected / 4.0;
}

// SNR (dB) at which PAM4 mutual information equals `bits_per_symbol`,
// bisected to 1e-4 dB.
inline double csl_snr(double bits_per_symbol) {
    if (bits_per_symbol <= 0.0 || bits_per_symbol >= 2.0)
        throw ConfigError("csl_snr: spectral efficiency must be in (0, 2)");
    double lo = -40.0, hi = 60.0;
    if (pam4_capacity(lo) >= bits_per_symbol || pam4_capacity(hi) <= bits_per_symbol)
        throw ComputeError("csl_snr: target outside bisection range");
    while (hi - lo > 1e-4) {
        double mid = 0.5 * (lo + hi);
        (pam4_capacity(mid) < bits_per_symbol ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Gap to the constrained Shannon limit at a target FER

struct GapResult {
    double gap_db = 0.0;
    double snr_at_target = 0.0;
    double snr_csl = 0.0;
    double spectral_efficiency = 0.0;  // bits per PAM4 symbol
    double target = 1e-13;
    std::vector<CurvePoint> curve;  // every point evaluated, sorted by SNR
};

namespace detail {

inline double snap_db(double snr) { return std::llround(snr * 10.0) / 10.0; }

} // namespace detail

// Locates the SNR where the semi-analytic FER crosses `target`: coarse probes
// in 0.8 dB steps starting 2 dB above the CSL, then a 0.1 dB grid across the
// bracketing interval, then log-linear interpolation.
inline GapResult gap_to_csl(const FrameGeometry& geom, int J, UProvider& provider,
                            double target = 1e-13) {
    GapResult r;
    r.target = target;
    r.spectral_efficiency = 2.0 * overall_rate(geom);
    r.snr_csl = csl_snr(r.spectral_efficiency);

    GeometryAnalysis a = prepare_analysis(geom);
    SchemeConfig cfg = scheme_config_for(geom, J);
    std::map<int64_t, CurvePoint> seen;
    auto fer_at = [&](double snr) {
        int64_t key = std::llround(snr * 1e4);
        auto it = seen.find(key);
        if (it != seen.end()) return it->second;
        FerValue f = fer_point(a, provider.get(cfg, snr));
        CurvePoint p{snr, f.raw, f.clipped};
        seen.emplace(key, p);
        return p;
    };

    const double coarse = 0.8;
    double lo = detail::snap_db(r.snr_csl + 2.0);
    // walk left while already past the target at the starting probe
    while (fer_at(lo).fer_clipped < target) {
        lo = detail::snap_db(lo - coarse);
        if (lo < r.snr_csl - 4.0)
            throw ComputeError("gap_to_csl: FER below target arbitrarily close to the CSL");
    }
    double hi = detail::snap_db(lo + coarse);
    while (fer_at(hi).fer_clipped >= target) {
        lo = hi;
        hi = detail::snap_db(hi + coarse);
        if (hi > r.snr_csl + 16.0)
            throw ComputeError("gap_to_csl: target unreachable within 16 dB of the CSL");
    }
    // refine on the 0.1 dB grid inside [lo, hi]
    for (double s = lo; s < hi + 0.05; s = detail::snap_db(s + 0.1)) fer_at(s);

    for (const auto& [key, p] : seen) r.curve.push_back(p);
    r.snr_at_target = snr_at_fer(r.curve, target);
    r.gap_db = r.snr_at_target - r.snr_csl;
    return r;
}

} // namespace fecpareto
