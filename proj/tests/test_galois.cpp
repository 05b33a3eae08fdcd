#include <catch2/catch_amalgamated.hpp>

#include "fecpareto/galois.hpp"

using namespace fecpareto;

namespace {

// independent shift-and-reduce power oracle: alpha^e under `poly`
uint32_t power_oracle(int b, uint32_t poly, int e) {
    uint32_t x = 1;
    for (int i = 0; i < e; ++i) {
        x <<= 1;
        if (x & (1u << b)) x ^= poly;
    }
    return x;
}

} // namespace

TEST_CASE("documented primitive polynomials", "[galois]") {
    // lexicographically smallest primitive polynomial per degree
    CHECK(build_field(5).primitive_poly == 0b100101u);   // x^5 + x^2 + 1
    CHECK(build_field(6).primitive_poly == 0b1000011u);  // x^6 + x + 1
}

TEST_CASE("alpha has full multiplicative order", "[galois]") {
    for (int b : {5, 6, 7, 8, 9, 10, 11}) {
        FieldSpec f = build_field(b);
        uint16_t alpha = f.antilog_table[1];
        uint16_t x = 1;
        int d = 0;
        do {
            x = gf_mul(f, x, alpha);
            ++d;
        } while (x != 1);
        CHECK(d == f.order());
    }
}

TEST_CASE("log and antilog tables invert each other", "[galois]") {
    FieldSpec f = build_field(7);
    for (int x = 1; x < f.q(); ++x)
        CHECK(f.antilog_table[f.log_table[x]] == x);
}

TEST_CASE("b=6, poly x^6+x+1: log(alpha + 1) = 6", "[galois]") {
    FieldSpec f = build_field(6);
    CHECK(f.log_table[0b000011] == 6);  // alpha^6 = alpha + 1
}

TEST_CASE("every nonzero element has a multiplicative inverse", "[galois]") {
    FieldSpec f = build_field(5);
    for (int x = 1; x < f.q(); ++x)
        CHECK(gf_mul(f, static_cast<uint16_t>(x), gf_inv(f, static_cast<uint16_t>(x))) == 1);
}

TEST_CASE("multiplication basics", "[galois]") {
    FieldSpec f = build_field(5);
    CHECK(gf_mul(f, 5, 0) == 0);
    CHECK(gf_mul(f, 0, 5) == 0);
    for (int y = 0; y < f.q(); ++y)
        CHECK(gf_mul(f, 1, static_cast<uint16_t>(y)) == y);

    // alpha^4 * alpha^4 = alpha^8, cross-checked against shift-reduce
    uint16_t a4 = f.antilog_table[4];
    CHECK(gf_mul(f, a4, a4) == f.antilog_table[8]);
    CHECK(f.antilog_table[8] == power_oracle(5, f.primitive_poly, 8));
}

TEST_CASE("field axioms, exhaustive for b=5", "[galois]") {
    FieldSpec f = build_field(5);
    const int q = f.q();
    for (int x = 0; x < q; ++x)
        for (int y = 0; y < q; ++y) {
            CHECK(gf_mul(f, x, y) == gf_mul(f, y, x));
            for (int z = 0; z < q; ++z) {
                REQUIRE(gf_mul(f, gf_mul(f, x, y), z) == gf_mul(f, x, gf_mul(f, y, z)));
                REQUIRE(gf_mul(f, x, gf_add(y, z)) ==
                        gf_add(gf_mul(f, x, y), gf_mul(f, x, z)));
            }
        }
}

TEST_CASE("x^(2^b - 1) = 1 for all nonzero x", "[galois]") {
    for (int b : {5, 8, 11}) {
        FieldSpec f = build_field(b);
        for (int x = 1; x < f.q(); ++x) {
            uint16_t acc = 1;
            for (int e = 0; e < f.order(); ++e) acc = gf_mul(f, acc, static_cast<uint16_t>(x));
            REQUIRE(acc == 1);
        }
    }
}

TEST_CASE("out-of-range extension degree is rejected", "[galois]") {
    CHECK_THROWS_AS(build_field(4), ConfigError);
    CHECK_THROWS_AS(build_field(12), ConfigError);
}
