#include <doctest.h>

#include "zxwring/poly.hpp"

#include <random>
#include <string>

using namespace zxw;

namespace {

GaussianRational gr(long re, long im = 0) {
    GaussianRational g(re);
    g.im = Rat(im);
    return g;
}

MultilinearPoly random_poly(std::mt19937_64& rng, int n) {
    MultilinearPoly p(n);
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> keep(0, 2);
    for (unsigned m = 0; m < p.n_masks(); ++m)
        if (keep(rng) != 0) p.set(m, gr(coeff(rng), coeff(rng)));
    return p;
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("parse recovers subset coefficients") {
    auto p = poly_parse("3x1 + 2", 1);
    CHECK(p.n_vars == 1);
    CHECK(p.get(0) == gr(2));
    CHECK(p.get(1) == gr(3));

    auto q = poly_parse("x1x2 - 4x2 + 0.5", 2);
    CHECK(q.n_vars == 2);
    CHECK(q.get(0b11) == gr(1));
    CHECK(q.get(0b01) == gr(-4));
    CHECK(q.get(0b10).is_zero());
    GaussianRational half(Rat(1, 2));
    CHECK(q.get(0) == half);
}

TEST_CASE("variable count inferred from largest index") {
    auto p = poly_parse("x3 + 1");
    CHECK(p.n_vars == 3);
    CHECK(p.get(0b001) == gr(1));
    CHECK_THROWS_AS((void)poly_parse("x3", 2), PolyParseError);
}

TEST_CASE("squares vanish") {
    CHECK(poly_parse("x1^2", 1).is_zero());
    CHECK(poly_parse("x1*x1", 1).is_zero());
    auto p = poly_parse("(x1 + 1)^2", 1);  // 2x1 + 1 once x1^2 dies
    CHECK(p.get(1) == gr(2));
    CHECK(p.get(0) == gr(1));
}

TEST_CASE("product of affine polynomials collapses to degree one") {
    auto a = poly_parse("x1 - 1", 1);
    auto b = poly_parse("2x1 + 3", 1);
    auto prod = poly_mul(a, b);
    CHECK(poly_print(prod) == "x1 - 3");
    auto sum = poly_add(a, b);
    CHECK(poly_print(sum) == "3x1 + 2");
}

TEST_CASE("unicode minus accepted") {
    auto a = poly_parse("x1 − 1", 1);
    CHECK(a.get(0) == gr(-1));
    auto prod = poly_mul(a, poly_parse("2x1 + 3", 1));
    CHECK(poly_print(prod) == "x1 - 3");
}

TEST_CASE("imaginary and decimal literals are exact") {
    auto p = poly_parse("2i x1 + 0.1 - i", 1);
    GaussianRational c0(Rat(1, 10));
    c0.im = Rat(-1);
    CHECK(p.get(0) == c0);
    GaussianRational c1(Rat(0));
    c1.im = Rat(2);
    CHECK(p.get(1) == c1);
    CHECK(poly_parse("1e2", 0).get(0) == gr(100));
    CHECK(poly_parse("2.5e-1", 0).get(0) == GaussianRational(Rat(1, 4)));
}

TEST_CASE("print canonical form") {
    MultilinearPoly p(2);
    p.set(0b10, gr(1));   // x1
    p.set(0b01, gr(-1));  // x2
    p.set(0b11, gr(0, 1));
    p.set(0, gr(-2));
    CHECK(poly_print(p) == "ix1x2 + x1 - x2 - 2");
    CHECK(poly_print(MultilinearPoly(3)) == "0");
    CHECK(poly_print(MultilinearPoly::constant(0, gr(0, -1))) == "-i");
    CHECK(poly_print(poly_parse("(2+3i)x1 + 1", 1)) == "(2+3i)x1 + 1");
}

TEST_CASE("print then parse round trips") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int n = static_cast<int>(rng() % 4);
        auto p = random_poly(rng, n);
        auto back = poly_parse(poly_print(p), n);
        CHECK(back == p);
    }
}

TEST_CASE("ring identities on random inputs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 3;
        auto a = random_poly(rng, n);
        auto b = random_poly(rng, n);
        auto c = random_poly(rng, n);
        CHECK(poly_mul(a, b) == poly_mul(b, a));
        CHECK(poly_mul(a, poly_add(b, c)) == poly_add(poly_mul(a, b), poly_mul(a, c)));
        CHECK(poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c)));
        CHECK(poly_add(a, poly_neg(a)).is_zero());
        CHECK(poly_mul(a, MultilinearPoly::constant(n, gr(1))) == a);
        // Any single variable squares to zero, so a*a keeps only the products
        // of distinct monomials; check the specific x^2 = 0 consequence.
        CHECK(poly_mul(MultilinearPoly::variable(n, 2),
                       MultilinearPoly::variable(n, 2))
                  .is_zero());
    }
}

TEST_CASE("padding appends fresh variables") {
    auto p = poly_parse("x1x2 + x2", 2);
    auto q = poly_pad(p, 4);
    CHECK(q.n_vars == 4);
    CHECK(q.get(0b1100) == gr(1));
    CHECK(q.get(0b0100) == gr(1));
    CHECK_THROWS(poly_pad(p, 1));
}

TEST_CASE("parse errors carry position context") {
    CHECK_THROWS_WITH_AS((void)poly_parse("x1 + ", 1),
                         doctest::Contains("position 5"), PolyParseError);
    CHECK_THROWS_AS((void)poly_parse("x0", 1), PolyParseError);
    CHECK_THROWS_AS((void)poly_parse("3 @ 4", 0), PolyParseError);
    CHECK_THROWS_AS((void)poly_parse("", 1), PolyParseError);
    CHECK_THROWS_AS((void)poly_parse("x1 ^ -1", 1), PolyParseError);
}

}  // TEST_SUITE
