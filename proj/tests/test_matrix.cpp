#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "omf/matrix.hpp"

using namespace omf;

namespace {

// independent determinant oracle: cofactor expansion
Int det_cofactor(const imat& m) {
    int n = m.nr;
    if (n == 1) return m(0, 0);
    Int s = 0;
    int sign = 1;
    for (int j = 0; j < n; j++) {
        imat sub(n - 1, n - 1);
        for (int i = 1; i < n; i++) {
            int cc = 0;
            for (int c = 0; c < n; c++) {
                if (c == j) continue;
                sub(i - 1, cc++) = m(i, c);
            }
        }
        s += sign * m(0, j) * det_cofactor(sub);
        sign = -sign;
    }
    return s;
}

// independent charpoly oracle: evaluate det(xI - A) at n+1 points and
// solve the Vandermonde system exactly
std::vector<Int> charpoly_interpolation(const imat& m) {
    int n = m.nr;
    qmat v(n + 1, n + 1);
    std::vector<Rat> rhs(n + 1);
    for (int k = 0; k <= n; k++) {
        imat xk(n, n);
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++) xk(i, j) = (i == j ? Int(k) : Int(0)) - m(i, j);
        rhs[k] = Rat(det(xk));
        Int pw = 1;
        for (int j = 0; j <= n; j++) {
            v(k, j) = Rat(pw);
            pw *= k;
        }
    }
    auto sol = solve(v, rhs);
    std::vector<Int> c(n + 1);
    for (int i = 0; i <= n; i++) {
        REQUIRE(sol[i].get_den() == 1);
        c[i] = Int(sol[i].get_num());
    }
    return c;
}

imat random_imat(std::mt19937& rng, int n, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    imat m(n, n);
    for (auto& x : m.a) x = d(rng);
    return m;
}

}  // namespace

TEST_CASE("bareiss determinant agrees with cofactor expansion") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 30; trial++) {
        imat m = random_imat(rng, 5, -9, 9);
        REQUIRE(det(m) == det_cofactor(m));
    }
    REQUIRE(det(imat::identity(5)) == 1);
}

TEST_CASE("rational det and inverse") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 10; trial++) {
        imat m = random_imat(rng, 4, -5, 5);
        if (det(m) == 0) continue;
        qmat q = to_q(m);
        qmat inv = inverse(q);
        REQUIRE(q * inv == qmat::identity(4));
        REQUIRE(det(q) == Rat(det(m)));
    }
}

TEST_CASE("hnf preserves row span and is idempotent") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; trial++) {
        imat m = random_imat(rng, 6, -7, 7);
        imat h = hnf(m);
        REQUIRE(hnf(h) == h);
        // same row span: each is integrally expressible in the other's HNF
        imat stacked(m.nr + h.nr, m.nc);
        for (int i = 0; i < m.nr; i++)
            for (int j = 0; j < m.nc; j++) stacked(i, j) = m(i, j);
        for (int i = 0; i < h.nr; i++)
            for (int j = 0; j < m.nc; j++) stacked(m.nr + i, j) = h(i, j);
        REQUIRE(hnf(stacked) == h);
    }
}

TEST_CASE("kernel and solve") {
    qmat m(2, 4);
    m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3; m(0, 3) = 4;
    m(1, 0) = 2; m(1, 1) = 4; m(1, 2) = 6; m(1, 3) = 9;
    qmat k = kernel(m);
    REQUIRE(k.nc == 2);
    REQUIRE((m * k).is_zero());

    std::vector<Rat> b = {Rat(1), Rat(2)};
    auto x = solve(m, b);
    Rat r0 = m(0, 0) * x[0] + m(0, 1) * x[1] + m(0, 2) * x[2] + m(0, 3) * x[3];
    Rat r1 = m(1, 0) * x[0] + m(1, 1) * x[1] + m(1, 2) * x[2] + m(1, 3) * x[3];
    REQUIRE(r0 == b[0]);
    REQUIRE(r1 == b[1]);
}

TEST_CASE("smith normal form diagonal") {
    imat m(3, 3, {Int(2), Int(4), Int(4), Int(-6), Int(6), Int(12), Int(10), Int(4), Int(16)});
    auto d = snf_diagonal(m);
    REQUIRE(d.size() == 3);
    REQUIRE(d[0] == 2);
    REQUIRE(d[1] == 2);
    // product of elementary divisors = |det|
    REQUIRE(d[0] * d[1] * d[2] == abs(det(m)));
    for (size_t i = 0; i + 1 < d.size(); i++) REQUIRE(d[i + 1] % d[i] == 0);
}

TEST_CASE("charpoly: identity") {
    auto c = charpoly(imat::identity(2));
    // (x-1)^2 = x^2 - 2x + 1
    REQUIRE(c == std::vector<Int>{Int(1), Int(-2), Int(1)});
}

TEST_CASE("charpoly: companion matrix of x^3 - x^2 - 10x + 8") {
    imat m(3, 3);
    m(0, 2) = -8; m(1, 2) = 10; m(2, 2) = 1;
    m(1, 0) = 1; m(2, 1) = 1;
    auto c = charpoly(m);
    REQUIRE(c == std::vector<Int>{Int(8), Int(-10), Int(-1), Int(1)});
}

TEST_CASE("charpoly CRT agrees with interpolation oracle") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 8; trial++) {
        imat m = random_imat(rng, 8, -20, 20);
        REQUIRE(charpoly(m) == charpoly_interpolation(m));
    }
}

TEST_CASE("rational charpoly scaling") {
    qmat m(2, 2);
    m(0, 0) = Rat(1, 2);
    m(1, 1) = Rat(1, 3);
    auto c = charpoly(m);
    // (x - 1/2)(x - 1/3) = x^2 - 5/6 x + 1/6
    REQUIRE(c[0] == Rat(1, 6));
    REQUIRE(c[1] == Rat(-5, 6));
    REQUIRE(c[2] == 1);
}
