#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "fecpareto/bch.hpp"
#include "fecpareto/errors.hpp"
#include "fecpareto/pam4.hpp"

namespace fecpareto {

// Outer RS(N, K = N - 2T) code over GF(2^B) symbols.
struct OuterSpec {
    int N = 0, K = 0, T = 0, B = 10;
};

inline OuterSpec make_outer(int N, int T, int B = 10) {
    OuterSpec o{N, N - 2 * T, T, B};
    if (B <= 0 || B % 2 != 0) throw ConfigError("OuterSpec: B must be even and positive");
    if (o.K < 1) throw ConfigError("OuterSpec: K = N - 2T must be >= 1");
    if (!(2 * T < N && N <= (1 << B) - 1))
        throw ConfigError("OuterSpec: need 2T < N <= 2^B - 1");
    if (T < 0) throw ConfigError("OuterSpec: T must be >= 0");
    return o;
}

struct InnerCode {
    int n = 0, k = 0, b = 0, t = 0;

    static InnerCode of(const BchSpec& s) { return {s.n, s.k, s.b(), s.t}; }
};

// Strips of one RS word: `strips` lists (L, count) with sum L*count = N.
// `words` is how many RS words share this layout.
struct StripFamily {
    std::vector<std::pair<int, long>> strips;
    long words = 0;
};

// One concatenated configuration. M outer RS words, m inner BCH words, and
// the strip layout tying them together.
struct FrameGeometry {
    OuterSpec outer;
    InnerCode inner;
    Scheme scheme = Scheme::MLC;
    long M = 0, m = 0;
    std::vector<StripFamily> families;

    long info_bits_per_frame() const {
        return M * static_cast<long>(outer.K) * outer.B;
    }
};

// Canonical geometry m = N, M = k/B (BICM) or 2k/B (MLC), every strip one RS
// symbol long. This is the family every published operating point uses.
inline FrameGeometry build_geometry(const OuterSpec& outer, const InnerCode& inner,
                                    Scheme scheme) {
    const int payload = scheme == Scheme::BICM ? inner.k : 2 * inner.k;
    if (payload % outer.B != 0)
        throw ConfigError("build_geometry: no admissible geometry (" +
                          std::string(scheme == Scheme::BICM ? "B | k" : "B | 2k") +
                          " fails for k=" + std::to_string(inner.k) + ")");
    FrameGeometry g;
    g.outer = outer;
    g.inner = inner;
    g.scheme = scheme;
    g.m = outer.N;
    g.M = payload / outer.B;
    g.families = {StripFamily{{{1, g.m}}, g.M}};
    return g;
}

// Validates an explicitly supplied strip-length matrix L[i][j] against the
// bookkeeping identities and compresses it into families.
inline FrameGeometry validate_geometry(const OuterSpec& outer, const InnerCode& inner,
                                       Scheme scheme,
                                       const std::vector<std::vector<int>>& L) {
    const long M = static_cast<long>(L.size());
    if (M < 1) throw ConfigError("validate_geometry: M must be >= 1");
    const long m = static_cast<long>(L[0].size());
    const int payload = scheme == Scheme::BICM ? inner.k : 2 * inner.k;
    const int lo = static_cast<int>(outer.N / m);
    const int hi = static_cast<int>((outer.N + m - 1) / m);

    std::vector<long> col_sum(m, 0);
    for (const auto& row : L) {
        if (static_cast<long>(row.size()) != m)
            throw ConfigError("validate_geometry: ragged strip matrix");
        long row_sum = 0;
        for (long j = 0; j < m; ++j) {
            if (row[j] != lo && row[j] != hi)
                throw ConfigError("validate_geometry: L out of {floor(N/m), ceil(N/m)}");
            row_sum += row[j];
            col_sum[j] += row[j];
        }
        if (row_sum != outer.N)
            throw ConfigError("validate_geometry: row sum != N");
    }
    for (long j = 0; j < m; ++j)
        if (col_sum[j] * outer.B != payload)
            throw ConfigError("validate_geometry: column payload != " +
                              std::to_string(payload) + " bits");

    FrameGeometry g;
    g.outer = outer;
    g.inner = inner;
    g.scheme = scheme;
    g.M = M;
    g.m = m;
    // group identical rows, preserving first-seen order
    std::vector<std::vector<int>> seen;
    for (const auto& row : L) {
        auto it = std::find(seen.begin(), seen.end(), row);
        if (it != seen.end()) {
            g.families[it - seen.begin()].words += 1;
            continue;
        }
        seen.push_back(row);
        StripFamily fam;
        fam.words = 1;
        std::vector<int> sorted_row = row;
        std::sort(sorted_row.begin(), sorted_row.end());
        for (int v : sorted_row) {
            if (!fam.strips.empty() && fam.strips.back().first == v)
                fam.strips.back().second += 1;
            else
                fam.strips.push_back({v, 1});
        }
        g.families.push_back(std::move(fam));
    }
    return g;
}

inline double overall_rate(const FrameGeometry& g) {
    const double info = static_cast<double>(g.info_bits_per_frame());
    const double tx = static_cast<double>(g.m) *
                      (g.scheme == Scheme::BICM ? g.inner.n : g.inner.n + g.inner.k);
    return info / tx;
}

inline long latency_bits(const FrameGeometry& g) {
    return g.m * static_cast<long>(g.scheme == Scheme::BICM ? g.inner.n : g.inner.n + g.inner.k);
}

// Elementary-operations model. The accounting the paper used is unpublished;
// this substitute counts, per inner word, a reliability sort plus per test
// pattern syndromes, the key equation, a Chien pass and the analog weight,
// and per outer word syndromes, key equation, Chien and Forney. Absolute
// values are not comparable with the paper's; orderings in J, t, T are.
struct ComplexityModel {
    static long ceil_log2(long n) { return std::bit_width(static_cast<uint64_t>(n - 1)); }

    static double inner_word_ops(int n, int t, int J) {
        return static_cast<double>(n) * ceil_log2(n) +
               std::pow(2.0, J) * (2.0 * t * n + 2.0 * t * t + static_cast<double>(n) * t + n);
    }
    static double outer_word_ops(int N, int T) {
        return 2.0 * T * N + 2.0 * T * T + static_cast<double>(N) * T + 2.0 * T;
    }
};

inline double complexity_per_bit(const FrameGeometry& g, int J) {
    const double inner = ComplexityModel::inner_word_ops(g.inner.n, g.inner.t, J);
    const double outer = ComplexityModel::outer_word_ops(g.outer.N, g.outer.T);
    return (g.m * inner + g.M * outer) / static_cast<double>(g.info_bits_per_frame());
}

} // namespace fecpareto
