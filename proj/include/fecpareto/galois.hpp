#pragma once

#include <cstdint>
#include <vector>

#include "fecpareto/errors.hpp"

namespace fecpareto {

// GF(2^b) built from the lexicographically smallest primitive polynomial of
// degree b. Immutable after construction, safe to share across threads.
struct FieldSpec {
    int b = 0;
    uint32_t primitive_poly = 0;           // coefficient bits, degree b down to 0
    std::vector<uint16_t> log_table;       // index: element, value: discrete log (log of 0 unused)
    std::vector<uint16_t> antilog_table;   // index: exponent in [0, 2^b-2], value: element

    int q() const { return 1 << b; }
    int order() const { return (1 << b) - 1; }  // multiplicative order of alpha
};

inline uint16_t gf_add(uint16_t x, uint16_t y) { return x ^ y; }

inline uint16_t gf_mul(const FieldSpec& f, uint16_t x, uint16_t y) {
    if (x == 0 || y == 0) return 0;
    int s = f.log_table[x] + f.log_table[y];
    if (s >= f.order()) s -= f.order();
    return f.antilog_table[s];
}

inline uint16_t gf_inv(const FieldSpec& f, uint16_t x) {
    if (x == 0) throw ComputeError("gf_inv: zero has no inverse");
    int e = (f.order() - f.log_table[x]) % f.order();
    return f.antilog_table[e];
}

// alpha^e for any integer exponent e
inline uint16_t gf_alpha_pow(const FieldSpec& f, long e) {
    long m = e % f.order();
    if (m < 0) m += f.order();
    return f.antilog_table[m];
}

namespace detail {

// Fills tables by repeated shift-and-reduce. Returns false when alpha = x does
// not have full multiplicative order under poly (i.e. poly is not primitive).
inline bool try_build_tables(int b, uint32_t poly, FieldSpec& f) {
    const int q = 1 << b;
    f.log_table.assign(q, 0xFFFF);
    f.antilog_table.assign(q - 1, 0);
    uint32_t x = 1;
    for (int i = 0; i < q - 1; ++i) {
        if (f.log_table[x] != 0xFFFF) return false;  // cycle shorter than q-1
        f.log_table[x] = static_cast<uint16_t>(i);
        f.antilog_table[i] = static_cast<uint16_t>(x);
        x <<= 1;
        if (x & q) x ^= poly;
    }
    return x == 1;
}

} // namespace detail

inline FieldSpec build_field(int b) {
    if (b < 5 || b > 11)
        throw ConfigError("build_field: b must be in 5..11, got " + std::to_string(b));
    FieldSpec f;
    f.b = b;
    // scan monic degree-b polynomials with nonzero constant term in increasing
    // integer order; the first primitive one is the documented choice
    for (uint32_t poly = (1u << b) | 1u; poly < (2u << b); poly += 2) {
        if (detail::try_build_tables(b, poly, f)) {
            f.primitive_poly = poly;
            return f;
        }
    }
    throw ComputeError("build_field: no primitive polynomial found (unreachable)");
}

} // namespace fecpareto
