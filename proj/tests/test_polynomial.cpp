#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "omf/polynomial.hpp"

using namespace omf;

namespace {

zpoly zp(std::initializer_list<long> coeffs) {
    zpoly f;
    for (long c : coeffs) f.push_back(Int(c));
    ztrim(f);
    return f;
}

zpoly random_monic(std::mt19937& rng, int deg, int range) {
    std::uniform_int_distribution<int> d(-range, range);
    zpoly f(deg + 1);
    for (int i = 0; i < deg; i++) f[i] = d(rng);
    f[deg] = 1;
    return f;
}

}  // namespace

TEST_CASE("polynomial arithmetic basics") {
    zpoly a = zp({1, 2, 1});   // (x+1)^2
    zpoly b = zp({-1, 1});     // x-1
    REQUIRE(zmul(a, b) == zp({-1, -1, 1, 1}));
    REQUIRE(zeval(a, Int(3)) == 16);
    REQUIRE(zderiv(a) == zp({2, 2}));
    REQUIRE(zdivides(b, zmul(a, b)));
    REQUIRE(!zdivides(b, a));
    REQUIRE(zdivexact(zmul(a, b), b) == a);
}

TEST_CASE("squarefree decomposition") {
    // (x-1)^2 (x+2)^3 (x^2+1)
    zpoly f = zp({1});
    for (int i = 0; i < 2; i++) f = zmul(f, zp({-1, 1}));
    for (int i = 0; i < 3; i++) f = zmul(f, zp({2, 1}));
    f = zmul(f, zp({1, 0, 1}));
    auto sq = squarefree_decomposition(f);
    std::map<int, zpoly> by_mult;
    for (auto& [g, m] : sq) by_mult[m] = g;
    REQUIRE(by_mult[1] == zp({1, 0, 1}));
    REQUIRE(by_mult[2] == zp({-1, 1}));
    REQUIRE(by_mult[3] == zp({2, 1}));
}

TEST_CASE("factor: small known cases") {
    // x^2 - 1
    auto f1 = factor(zp({-1, 0, 1}));
    REQUIRE(f1.size() == 2);
    REQUIRE(f1[0].first == zp({-1, 1}));
    REQUIRE(f1[1].first == zp({1, 1}));
    // x^3 - x^2 - 10x + 8 is irreducible
    REQUIRE(is_irreducible(zp({8, -10, -1, 1})));
    // cyclotomic: x^4 + x^3 + x^2 + x + 1
    REQUIRE(is_irreducible(zp({1, 1, 1, 1, 1})));
    // x^4 + 4 = (x^2-2x+2)(x^2+2x+2)
    auto f2 = factor(zp({4, 0, 0, 0, 1}));
    REQUIRE(f2.size() == 2);
    REQUIRE(zmul(f2[0].first, f2[1].first) == zp({4, 0, 0, 0, 1}));
    // x^2 + x + 1 over a product with a linear factor
    auto f3 = factor(zmul(zp({1, 1, 1}), zp({-3, 1})));
    REQUIRE(f3.size() == 2);
}

TEST_CASE("factor: products of random irreducibles reassemble") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 12; trial++) {
        // product of two or three random monic polynomials
        std::uniform_int_distribution<int> nd(2, 3), dd(1, 4);
        int parts = nd(rng);
        zpoly prod = zp({1});
        for (int i = 0; i < parts; i++) prod = zmul(prod, random_monic(rng, dd(rng), 6));
        auto fs = factor(prod);
        zpoly re = zp({1});
        for (auto& [g, m] : fs) {
            REQUIRE(is_irreducible(g));
            for (int i = 0; i < m; i++) re = zmul(re, g);
        }
        REQUIRE(re == prod);
    }
}

TEST_CASE("factor handles large-coefficient cyclotomic-like inputs") {
    // x^8 - 1 = (x-1)(x+1)(x^2+1)(x^4+1)
    zpoly f = zp({-1, 0, 0, 0, 0, 0, 0, 0, 1});
    auto fs = factor(f);
    REQUIRE(fs.size() == 4);
    zpoly re = zp({1});
    for (auto& [g, m] : fs)
        for (int i = 0; i < m; i++) re = zmul(re, g);
    REQUIRE(re == f);
}

TEST_CASE("factor of a non-monic polynomial") {
    // (2x - 1)(3x + 5)
    zpoly f = zmul(zp({-1, 2}), zp({5, 3}));
    auto fs = factor(f);
    REQUIRE(fs.size() == 2);
    zpoly re = zp({1});
    for (auto& [g, m] : fs)
        for (int i = 0; i < m; i++) re = zmul(re, g);
    REQUIRE(re == f);
}

TEST_CASE("factor of a swinnerton-dyer style hard case") {
    // minimal polynomial of sqrt(2)+sqrt(3): x^4 - 10x^2 + 1 (irreducible,
    // but splits into quadratics mod every prime)
    REQUIRE(is_irreducible(zp({1, 0, -10, 0, 1})));
}
