#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fecpareto/errors.hpp"
#include "fecpareto/galois.hpp"

namespace fecpareto {

// Shortened, extended binary BCH code. The transmitted word has n bits laid
// out as [k info bits | b*t cyclic parity bits | 1 overall even-parity bit].
// Bit position j of the cyclic part (j in 0..n-2) corresponds to coefficient
// degree n-2-j of the parent cyclic code; the `shorten` removed positions are
// leading information bits fixed to zero and never transmitted.
struct BchSpec {
    FieldSpec field;
    int t = 0;
    int n = 0;         // transmitted length, including the extension bit
    int k = 0;         // k = n - b*t - 1
    int parent_n = 0;  // 2^b - 1
    int shorten = 0;   // parent_n - (n - 1)
    uint64_t gen_poly = 0;  // bit i = coefficient of x^i, degree exactly b*t

    int b() const { return field.b; }
    int parity_bits() const { return field.b * t; }
};

struct SoftWord {
    std::vector<uint8_t> hard_bits;
    std::vector<double> reliabilities;  // |LLR| per bit, >= 0
};

struct BdResult {
    std::vector<uint8_t> codeword;
    bool ok = false;
};

namespace detail {

// minimal polynomial of alpha^i as a GF(2) coefficient mask
inline uint64_t minimal_poly(const FieldSpec& f, int i) {
    // cyclotomic coset of i mod 2^b - 1
    std::vector<int> coset;
    int c = i % f.order();
    do {
        coset.push_back(c);
        c = (2 * c) % f.order();
    } while (c != i % f.order());

    // product of (x - alpha^j) over the coset, computed in GF(2^b)[x]
    std::vector<uint16_t> poly{1};
    for (int j : coset) {
        uint16_t root = gf_alpha_pow(f, j);
        std::vector<uint16_t> next(poly.size() + 1, 0);
        for (size_t d = 0; d < poly.size(); ++d) {
            next[d + 1] ^= poly[d];
            next[d] ^= gf_mul(f, poly[d], root);
        }
        poly = std::move(next);
    }
    uint64_t mask = 0;
    for (size_t d = 0; d < poly.size(); ++d) {
        if (poly[d] > 1)
            throw ComputeError("minimal_poly: coefficient outside GF(2)");
        if (poly[d]) mask |= 1ull << d;
    }
    return mask;
}

inline int poly_degree(uint64_t mask) {
    int d = -1;
    while (mask) { ++d; mask >>= 1; }
    return d;
}

// product of two GF(2)[x] polynomials given as masks
inline uint64_t poly_mul(uint64_t a, uint64_t b) {
    uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

} // namespace detail

inline BchSpec design_bch(int b, int t, int n) {
    if (t < 1 || t > 3)
        throw ConfigError("design_bch: t must be in 1..3, got " + std::to_string(t));
    BchSpec spec;
    spec.field = build_field(b);  // validates b
    if (n < b * t + 2 || n > (1 << b))
        throw ConfigError("design_bch: n out of range for (b=" + std::to_string(b) +
                          ", t=" + std::to_string(t) + "): " + std::to_string(n));
    spec.t = t;
    spec.n = n;
    spec.parent_n = spec.field.order();
    spec.shorten = spec.parent_n - (n - 1);

    // lcm of the minimal polynomials of alpha^1 .. alpha^2t; for binary BCH
    // this is the product over the distinct odd-coset representatives
    uint64_t gen = 1;
    std::vector<uint64_t> used;
    for (int i = 1; i <= 2 * t; ++i) {
        uint64_t mp = detail::minimal_poly(spec.field, i);
        if (std::find(used.begin(), used.end(), mp) == used.end()) {
            used.push_back(mp);
            gen = detail::poly_mul(gen, mp);
        }
    }
    spec.gen_poly = gen;
    if (detail::poly_degree(gen) != b * t)
        throw ConfigError("design_bch: inadmissible (b,t) = (" + std::to_string(b) + "," +
                          std::to_string(t) + "): generator degree " +
                          std::to_string(detail::poly_degree(gen)) + " != b*t");
    spec.k = n - b * t - 1;
    return spec;
}

inline std::vector<uint8_t> encode(const BchSpec& spec, std::span<const uint8_t> info) {
    if (static_cast<int>(info.size()) != spec.k)
        throw ConfigError("encode: info length " + std::to_string(info.size()) +
                          " != k = " + std::to_string(spec.k));
    const int p = spec.parity_bits();
    const uint64_t reg_mask = (p < 64) ? ((1ull << p) - 1) : ~0ull;
    const uint64_t g_low = spec.gen_poly & reg_mask;  // generator minus its leading term

    // LFSR division: parity = x^p * m(x) mod g(x), with the shortened leading
    // zeros implicit (they never toggle the feedback)
    uint64_t reg = 0;
    for (int i = 0; i < spec.k; ++i) {
        uint64_t fb = info[i] ^ ((reg >> (p - 1)) & 1ull);
        reg = (reg << 1) & reg_mask;
        if (fb) reg ^= g_low;
    }

    std::vector<uint8_t> out(spec.n);
    std::copy(info.begin(), info.end(), out.begin());
    for (int i = 0; i < p; ++i)
        out[spec.k + i] = static_cast<uint8_t>((reg >> (p - 1 - i)) & 1ull);
    uint8_t par = 0;
    for (int i = 0; i < spec.n - 1; ++i) par ^= out[i];
    out[spec.n - 1] = par;
    return out;
}

namespace detail {

using Syndromes = std::array<uint16_t, 6>;  // up to 2t = 6

inline Syndromes syndromes(const BchSpec& spec, std::span<const uint8_t> bits) {
    Syndromes s{};
    const FieldSpec& f = spec.field;
    for (int j = 0; j < spec.n - 1; ++j) {
        if (!bits[j]) continue;
        long deg = spec.n - 2 - j;
        for (int l = 1; l <= 2 * spec.t; ++l)
            s[l - 1] ^= gf_alpha_pow(f, static_cast<long>(l) * deg);
    }
    return s;
}

// Berlekamp-Massey over GF(2^b); returns the error locator polynomial
// coefficients lambda[0..L] with lambda[0] = 1, or nullopt when the register
// length exceeds t.
inline std::optional<std::array<uint16_t, 4>> berlekamp_massey(const BchSpec& spec,
                                                               const Syndromes& s, int& L_out) {
    const FieldSpec& f = spec.field;
    const int nsyn = 2 * spec.t;
    std::array<uint16_t, 8> C{}, B{}, T{};
    C[0] = 1;
    B[0] = 1;
    int L = 0, m = 1;
    uint16_t bdisc = 1;
    for (int step = 0; step < nsyn; ++step) {
        uint16_t d = s[step];
        for (int i = 1; i <= L; ++i)
            d ^= gf_mul(f, C[i], s[step - i]);
        if (d == 0) {
            ++m;
        } else if (2 * L <= step) {
            T = C;
            uint16_t coef = gf_mul(f, d, gf_inv(f, bdisc));
            for (int i = 0; i + m < 8; ++i)
                C[i + m] ^= gf_mul(f, coef, B[i]);
            L = step + 1 - L;
            B = T;
            bdisc = d;
            m = 1;
        } else {
            uint16_t coef = gf_mul(f, d, gf_inv(f, bdisc));
            for (int i = 0; i + m < 8; ++i)
                C[i + m] ^= gf_mul(f, coef, B[i]);
            ++m;
        }
    }
    if (L > spec.t) return std::nullopt;
    std::array<uint16_t, 4> lambda{};
    for (int i = 0; i <= L; ++i) lambda[i] = C[i];
    L_out = L;
    return lambda;
}

// Error degrees in the parent code (0 .. n-2 after shortening), or nullopt on
// decoding failure.
inline std::optional<std::array<int, 3>> solve_error_degrees(const BchSpec& spec,
                                                             const Syndromes& s, int& count) {
    bool all_zero = true;
    for (int l = 0; l < 2 * spec.t; ++l)
        if (s[l]) { all_zero = false; break; }
    if (all_zero) {
        count = 0;
        return std::array<int, 3>{};
    }

    int L = 0;
    auto lambda = berlekamp_massey(spec, s, L);
    if (!lambda || L == 0) return std::nullopt;
    const FieldSpec& f = spec.field;
    std::array<int, 3> degs{};

    if (L == 1) {
        // lambda(x) = 1 + lambda1*x has root alpha^-d with d = log(lambda1)
        int d = f.log_table[(*lambda)[1]];
        if (d > spec.n - 2) return std::nullopt;
        degs[0] = d;
        count = 1;
        return degs;
    }

    // Chien search restricted to the valid (non-shortened) degrees
    int found = 0;
    for (int d = 0; d <= spec.n - 2 && found < L; ++d) {
        uint16_t x = gf_alpha_pow(f, -d);
        uint16_t acc = (*lambda)[L];
        for (int i = L - 1; i >= 0; --i)
            acc = gf_add(gf_mul(f, acc, x), (*lambda)[i]);
        if (acc == 0) degs[found++] = d;
    }
    if (found != L) return std::nullopt;
    count = L;
    return degs;
}

} // namespace detail

inline BdResult bd_decode(const BchSpec& spec, std::span<const uint8_t> hard) {
    if (static_cast<int>(hard.size()) != spec.n)
        throw ConfigError("bd_decode: word length != n");
    BdResult r;
    r.codeword.assign(hard.begin(), hard.end());
    auto s = detail::syndromes(spec, hard);
    int count = 0;
    auto degs = detail::solve_error_degrees(spec, s, count);
    if (!degs) {
        r.ok = false;
        return r;
    }
    for (int e = 0; e < count; ++e)
        r.codeword[spec.n - 2 - (*degs)[e]] ^= 1;
    uint8_t par = 0;
    for (int i = 0; i < spec.n - 1; ++i) par ^= r.codeword[i];
    r.codeword[spec.n - 1] = par;
    r.ok = true;
    return r;
}

// Chase-II with J test bits: flip every subset of the J least reliable
// positions (ties to the lower index), bounded-distance decode each pattern,
// and return the successful candidate of least analog weight. Patterns are
// enumerated as binary counters over the sorted position list and analog
// weight ties keep the first-found candidate. Returns the raw hard decision
// when no pattern decodes.
inline std::vector<uint8_t> chase_decode(const BchSpec& spec, const SoftWord& word, int J) {
    if (J < 0 || J > 6) throw ConfigError("chase_decode: J must be in 0..6");
    if (static_cast<int>(word.hard_bits.size()) != spec.n ||
        static_cast<int>(word.reliabilities.size()) != spec.n)
        throw ConfigError("chase_decode: word length != n");

    const int n = spec.n;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + J, idx.end(), [&](int a, int b) {
        if (word.reliabilities[a] != word.reliabilities[b])
            return word.reliabilities[a] < word.reliabilities[b];
        return a < b;
    });

    const auto base = detail::syndromes(spec, word.hard_bits);

    // per-test-position syndrome deltas (extension bit has none)
    std::array<detail::Syndromes, 6> delta{};
    for (int r = 0; r < J; ++r) {
        int pos = idx[r];
        if (pos >= n - 1) continue;
        long deg = n - 2 - pos;
        for (int l = 1; l <= 2 * spec.t; ++l)
            delta[r][l - 1] = gf_alpha_pow(spec.field, static_cast<long>(l) * deg);
    }

    std::vector<uint8_t> best;
    double best_weight = 0.0;
    bool have_best = false;
    std::vector<uint8_t> cand(n);

    for (uint32_t pattern = 0; pattern < (1u << J); ++pattern) {
        auto s = base;
        for (int r = 0; r < J; ++r) {
            if (!(pattern & (1u << r))) continue;
            if (idx[r] >= n - 1) continue;
            for (int l = 0; l < 2 * spec.t; ++l) s[l] ^= delta[r][l];
        }
        int count = 0;
        auto degs = detail::solve_error_degrees(spec, s, count);
        if (!degs) continue;

        cand.assign(word.hard_bits.begin(), word.hard_bits.end());
        for (int r = 0; r < J; ++r)
            if ((pattern & (1u << r)) && idx[r] < n - 1) cand[idx[r]] ^= 1;
        for (int e = 0; e < count; ++e)
            cand[n - 2 - (*degs)[e]] ^= 1;
        uint8_t par = 0;
        for (int i = 0; i < n - 1; ++i) par ^= cand[i];
        cand[n - 1] = par;

        double w = 0.0;
        for (int i = 0; i < n; ++i)
            if (cand[i] != word.hard_bits[i]) w += word.reliabilities[i];
        if (!have_best || w < best_weight) {
            best = cand;
            best_weight = w;
            have_best = true;
        }
    }
    if (!have_best) return word.hard_bits;
    return best;
}

} // namespace fecpareto
