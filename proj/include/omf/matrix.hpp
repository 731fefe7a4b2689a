#pragma once

// Dense exact matrices over Z and Q, sized for this project: dimensions
// stay small (5 for lattices, <= class-set size for Hecke blocks), so
// everything is straightforward cubic linear algebra with no reallocation
// tricks.  Determinants of integer matrices use fraction-free Bareiss
// elimination; characteristic polynomials go through mod-p Hessenberg
// plus CRT with a rigorous Hadamard-style coefficient bound.

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <vector>

#include "omf/arith.hpp"

namespace omf {

template <class T>
struct mat {
    int nr = 0, nc = 0;
    std::vector<T> a;

    mat() = default;
    mat(int r, int c) : nr(r), nc(c), a(size_t(r) * c) {}
    mat(int r, int c, std::initializer_list<T> init) : nr(r), nc(c), a(init) {
        assert((int)a.size() == r * c);
    }

    T& operator()(int i, int j) { return a[size_t(i) * nc + j]; }
    const T& operator()(int i, int j) const { return a[size_t(i) * nc + j]; }

    static mat identity(int n) {
        mat m(n, n);
        for (int i = 0; i < n; i++) m(i, i) = 1;
        return m;
    }

    bool operator==(const mat& o) const { return nr == o.nr && nc == o.nc && a == o.a; }

    mat transpose() const {
        mat t(nc, nr);
        for (int i = 0; i < nr; i++)
            for (int j = 0; j < nc; j++) t(j, i) = (*this)(i, j);
        return t;
    }

    mat operator*(const mat& o) const {
        assert(nc == o.nr);
        mat r(nr, o.nc);
        for (int i = 0; i < nr; i++)
            for (int k = 0; k < nc; k++) {
                const T& v = (*this)(i, k);
                if (v == 0) continue;
                for (int j = 0; j < o.nc; j++) r(i, j) += v * o(k, j);
            }
        return r;
    }

    mat operator+(const mat& o) const {
        assert(nr == o.nr && nc == o.nc);
        mat r = *this;
        for (size_t i = 0; i < a.size(); i++) r.a[i] += o.a[i];
        return r;
    }

    mat operator-(const mat& o) const {
        assert(nr == o.nr && nc == o.nc);
        mat r = *this;
        for (size_t i = 0; i < a.size(); i++) r.a[i] -= o.a[i];
        return r;
    }

    mat operator-() const {
        mat r = *this;
        for (auto& x : r.a) x = -x;
        return r;
    }

    mat operator*(const T& s) const {
        mat r = *this;
        for (auto& x : r.a) x *= s;
        return r;
    }

    std::vector<T> col(int j) const {
        std::vector<T> v(nr);
        for (int i = 0; i < nr; i++) v[i] = (*this)(i, j);
        return v;
    }

    std::vector<T> row(int i) const {
        std::vector<T> v(nc);
        for (int j = 0; j < nc; j++) v[j] = (*this)(i, j);
        return v;
    }

    bool is_zero() const {
        return std::all_of(a.begin(), a.end(), [](const T& x) { return x == 0; });
    }
};

using imat = mat<Int>;
using qmat = mat<Rat>;

inline std::vector<Int> operator*(const imat& m, const std::vector<Int>& v) {
    assert(m.nc == (int)v.size());
    std::vector<Int> r(m.nr);
    for (int i = 0; i < m.nr; i++)
        for (int j = 0; j < m.nc; j++) r[i] += m(i, j) * v[j];
    return r;
}

inline qmat to_q(const imat& m) {
    qmat r(m.nr, m.nc);
    for (size_t i = 0; i < m.a.size(); i++) r.a[i] = Rat(m.a[i]);
    return r;
}

// common denominator d and integer matrix n with m = n/d
inline std::pair<imat, Int> clear_denominators(const qmat& m) {
    Int d = 1;
    for (auto& x : m.a) d = lcm(d, Int(x.get_den()));
    imat n(m.nr, m.nc);
    for (size_t i = 0; i < m.a.size(); i++) {
        Rat v = m.a[i] * d;
        n.a[i] = Int(v.get_num());
    }
    return {n, d};
}

inline bool is_integral(const qmat& m) {
    return std::all_of(m.a.begin(), m.a.end(),
                       [](const Rat& x) { return x.get_den() == 1; });
}

inline imat to_int(const qmat& m) {
    imat r(m.nr, m.nc);
    for (size_t i = 0; i < m.a.size(); i++) {
        assert(m.a[i].get_den() == 1);
        r.a[i] = Int(m.a[i].get_num());
    }
    return r;
}

// Bareiss fraction-free determinant
inline Int det(const imat& m0) {
    assert(m0.nr == m0.nc);
    int n = m0.nr;
    if (n == 0) return 1;
    imat m = m0;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; k++) {
        if (m(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; i++)
                if (m(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = 0; j < n; j++) std::swap(m(k, j), m(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; i++)
            for (int j = k + 1; j < n; j++) {
                Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

inline Rat det(const qmat& m) {
    auto [n, d] = clear_denominators(m);
    Rat r(det(n));
    Rat dd(d);
    for (int i = 0; i < m.nr; i++) r /= dd;
    return r;
}

// in-place reduced row echelon form over Q; returns pivot columns
inline std::vector<int> rref(qmat& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.nc && r < m.nr; c++) {
        int piv = -1;
        for (int i = r; i < m.nr; i++)
            if (m(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        for (int j = 0; j < m.nc; j++) std::swap(m(r, j), m(piv, j));
        Rat inv = m(r, c);
        for (int j = 0; j < m.nc; j++) m(r, j) /= inv;
        for (int i = 0; i < m.nr; i++) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c);
            for (int j = 0; j < m.nc; j++) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        r++;
    }
    return pivots;
}

inline int rank(const qmat& m) {
    qmat t = m;
    return (int)rref(t).size();
}

inline int rank(const imat& m) { return rank(to_q(m)); }

// basis of the right kernel {x : m x = 0}, one column per basis vector
inline qmat kernel(const qmat& m) {
    qmat r = m;
    auto pivots = rref(r);
    std::vector<bool> is_pivot(m.nc, false);
    for (int c : pivots) is_pivot[c] = true;
    int dim = m.nc - (int)pivots.size();
    qmat k(m.nc, dim);
    int col = 0;
    for (int c = 0; c < m.nc; c++) {
        if (is_pivot[c]) continue;
        k(c, col) = 1;
        for (size_t pi = 0; pi < pivots.size(); pi++) k(pivots[pi], col) = -r((int)pi, c);
        col++;
    }
    return k;
}

// solve m x = b; requires consistency (throws otherwise)
inline std::vector<Rat> solve(const qmat& m, const std::vector<Rat>& b) {
    assert(m.nr == (int)b.size());
    qmat aug(m.nr, m.nc + 1);
    for (int i = 0; i < m.nr; i++) {
        for (int j = 0; j < m.nc; j++) aug(i, j) = m(i, j);
        aug(i, m.nc) = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == m.nc)
        throw error("Inconsistent", "linear system has no solution");
    std::vector<Rat> x(m.nc);
    for (size_t pi = 0; pi < pivots.size(); pi++) x[pivots[pi]] = aug((int)pi, m.nc);
    return x;
}

// solve M X = B columnwise
inline qmat solve(const qmat& m, const qmat& b) {
    qmat x(m.nc, b.nc);
    for (int j = 0; j < b.nc; j++) {
        auto xs = solve(m, b.col(j));
        for (int i = 0; i < m.nc; i++) x(i, j) = xs[i];
    }
    return x;
}

inline qmat inverse(const qmat& m) {
    assert(m.nr == m.nc);
    int n = m.nr;
    qmat aug(n, 2 * n);
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto pivots = rref(aug);
    if ((int)pivots.size() != n) throw error("Singular", "matrix not invertible");
    qmat inv(n, n);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) inv(i, j) = aug(i, n + j);
    return inv;
}

// row-style Hermite normal form: returns H with the same row span as m,
// zero rows dropped, pivots positive, entries above pivots reduced
inline imat hnf(const imat& m0) {
    imat m = m0;
    int r = 0;
    for (int c = 0; c < m.nc && r < m.nr; c++) {
        // euclidean elimination in column c below row r
        while (true) {
            int piv = -1;
            for (int i = r; i < m.nr; i++)
                if (m(i, c) != 0 && (piv < 0 || abs(m(i, c)) < abs(m(piv, c)))) piv = i;
            if (piv < 0) break;
            for (int j = 0; j < m.nc; j++) std::swap(m(r, j), m(piv, j));
            if (m(r, c) < 0)
                for (int j = 0; j < m.nc; j++) m(r, j) = -m(r, j);
            bool done = true;
            for (int i = r + 1; i < m.nr; i++) {
                if (m(i, c) == 0) continue;
                Int q = m(i, c) / m(r, c);  // floor toward zero is fine, loop handles rest
                for (int j = 0; j < m.nc; j++) m(i, j) -= q * m(r, j);
                if (m(i, c) != 0) done = false;
            }
            if (done) break;
        }
        if (m(r, c) == 0) continue;
        // reduce entries above the pivot
        for (int i = 0; i < r; i++) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), m(i, c).get_mpz_t(), m(r, c).get_mpz_t());
            if (q != 0)
                for (int j = 0; j < m.nc; j++) m(i, j) -= q * m(r, j);
        }
        r++;
    }
    imat h(r, m.nc);
    for (int i = 0; i < r; i++)
        for (int j = 0; j < m.nc; j++) h(i, j) = m(i, j);
    return h;
}

// Smith normal form diagonal of an integer matrix (d1 | d2 | ...), nonneg
inline std::vector<Int> snf_diagonal(const imat& m0) {
    imat m = m0;
    int n = std::min(m.nr, m.nc);
    std::vector<Int> d;
    int top = 0;
    while (top < n) {
        // find minimal nonzero entry in the remaining block
        int bi = -1, bj = -1;
        for (int i = top; i < m.nr; i++)
            for (int j = top; j < m.nc; j++)
                if (m(i, j) != 0 && (bi < 0 || abs(m(i, j)) < abs(m(bi, bj)))) { bi = i; bj = j; }
        if (bi < 0) break;
        for (int j = 0; j < m.nc; j++) std::swap(m(top, j), m(bi, j));
        for (int i = 0; i < m.nr; i++) std::swap(m(i, top), m(i, bj));
        bool clean = true;
        for (int i = top + 1; i < m.nr; i++) {
            Int q = m(i, top) / m(top, top);
            if (q != 0)
                for (int j = top; j < m.nc; j++) m(i, j) -= q * m(top, j);
            if (m(i, top) != 0) clean = false;
        }
        for (int j = top + 1; j < m.nc; j++) {
            Int q = m(top, j) / m(top, top);
            if (q != 0)
                for (int i = top; i < m.nr; i++) m(i, j) -= q * m(i, top);
            if (m(top, j) != 0) clean = false;
        }
        if (!clean) continue;
        // enforce divisibility of the remaining block
        bool redo = false;
        for (int i = top + 1; i < m.nr && !redo; i++)
            for (int j = top + 1; j < m.nc && !redo; j++)
                if (m(i, j) % m(top, top) != 0) {
                    for (int jj = top; jj < m.nc; jj++) m(top, jj) += m(i, jj);
                    redo = true;
                }
        if (redo) continue;
        d.push_back(abs(m(top, top)));
        top++;
    }
    return d;
}

// Smith normal form with transforms: u * m * v = s (u, v unimodular),
// s diagonal with nonnegative entries in divisibility order
struct snf_result {
    imat s, u, v;
};

inline snf_result snf(const imat& m0) {
    imat m = m0;
    imat u = imat::identity(m.nr), v = imat::identity(m.nc);
    int n = std::min(m.nr, m.nc);
    int top = 0;
    while (top < n) {
        int bi = -1, bj = -1;
        for (int i = top; i < m.nr; i++)
            for (int j = top; j < m.nc; j++)
                if (m(i, j) != 0 && (bi < 0 || abs(m(i, j)) < abs(m(bi, bj)))) { bi = i; bj = j; }
        if (bi < 0) break;
        if (bi != top)
            for (int j = 0; j < m.nc; j++) std::swap(m(top, j), m(bi, j));
        if (bi != top)
            for (int j = 0; j < m.nr; j++) std::swap(u(top, j), u(bi, j));
        if (bj != top) {
            for (int i = 0; i < m.nr; i++) std::swap(m(i, top), m(i, bj));
            for (int i = 0; i < m.nc; i++) std::swap(v(i, top), v(i, bj));
        }
        bool clean = true;
        for (int i = top + 1; i < m.nr; i++) {
            Int q = m(i, top) / m(top, top);
            if (q != 0) {
                for (int j = 0; j < m.nc; j++) m(i, j) -= q * m(top, j);
                for (int j = 0; j < m.nr; j++) u(i, j) -= q * u(top, j);
            }
            if (m(i, top) != 0) clean = false;
        }
        for (int j = top + 1; j < m.nc; j++) {
            Int q = m(top, j) / m(top, top);
            if (q != 0) {
                for (int i = 0; i < m.nr; i++) m(i, j) -= q * m(i, top);
                for (int i = 0; i < m.nc; i++) v(i, j) -= q * v(i, top);
            }
            if (m(top, j) != 0) clean = false;
        }
        if (!clean) continue;
        bool redo = false;
        for (int i = top + 1; i < m.nr && !redo; i++)
            for (int j = top + 1; j < m.nc && !redo; j++)
                if (m(i, j) % m(top, top) != 0) {
                    for (int jj = 0; jj < m.nc; jj++) m(top, jj) += m(i, jj);
                    for (int jj = 0; jj < m.nr; jj++) u(top, jj) += u(i, jj);
                    redo = true;
                }
        if (redo) continue;
        if (m(top, top) < 0) {
            for (int j = 0; j < m.nc; j++) m(top, j) = -m(top, j);
            for (int j = 0; j < m.nr; j++) u(top, j) = -u(top, j);
        }
        top++;
    }
    return {m, u, v};
}

// ---- mod-p dense linear algebra (p < 2^31) ----

struct pmat {
    int nr = 0, nc = 0;
    uint64_t p = 0;
    std::vector<uint64_t> a;
    pmat() = default;
    pmat(int r, int c, uint64_t pp) : nr(r), nc(c), p(pp), a(size_t(r) * c) {}
    uint64_t& operator()(int i, int j) { return a[size_t(i) * nc + j]; }
    const uint64_t& operator()(int i, int j) const { return a[size_t(i) * nc + j]; }
};

inline pmat reduce_mod(const imat& m, uint64_t p) {
    pmat r(m.nr, m.nc, p);
    for (size_t i = 0; i < m.a.size(); i++) r.a[i] = (uint64_t)mod_long(m.a[i], (long)p);
    return r;
}

// charpoly of a square mod-p matrix by Hessenberg reduction; returns
// monic coefficient vector c[0] + c[1] x + ... + x^n
inline std::vector<uint64_t> charpoly_mod(pmat m) {
    int n = m.nr;
    uint64_t p = m.p;
    // reduce to upper Hessenberg
    for (int c = 0; c < n - 2; c++) {
        int piv = -1;
        for (int i = c + 1; i < n; i++)
            if (m(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != c + 1) {
            for (int j = 0; j < n; j++) std::swap(m(c + 1, j), m(piv, j));
            for (int i = 0; i < n; i++) std::swap(m(i, c + 1), m(i, piv));
        }
        uint64_t inv = mod_inv(m(c + 1, c), p);
        for (int i = c + 2; i < n; i++) {
            if (m(i, c) == 0) continue;
            uint64_t f = m(i, c) * inv % p;
            uint64_t nf = (p - f) % p;
            for (int j = c; j < n; j++) m(i, j) = (m(i, j) + nf * m(c + 1, j)) % p;
            for (int j = 0; j < n; j++) m(j, c + 1) = (m(j, c + 1) + f * m(j, i)) % p;
        }
    }
    // recurrence on leading principal Hessenberg charpolys
    std::vector<std::vector<uint64_t>> cp(n + 1);
    cp[0] = {1};
    for (int k = 1; k <= n; k++) {
        // cp[k] = (x - m[k-1][k-1]) * cp[k-1] - sum_i (prod of subdiag) * m[i][k-1] * cp[i]
        std::vector<uint64_t> v(k + 1, 0);
        uint64_t d = m(k - 1, k - 1) % p;
        for (int i = 0; i < k; i++) {
            v[i + 1] = (v[i + 1] + cp[k - 1][i]) % p;
            v[i] = (v[i] + (p - d) * cp[k - 1][i]) % p;
        }
        uint64_t prod = 1;
        for (int i = k - 2; i >= 0; i--) {
            prod = prod * m(i + 1, i) % p;
            uint64_t f = prod * m(i, k - 1) % p;
            if (f)
                for (int j = 0; j <= i; j++) v[j] = (v[j] + (p - f) * cp[i][j] % p) % p;
        }
        cp[k] = std::move(v);
    }
    return cp[n];
}

namespace detail {
inline std::vector<long>& crt_prime_pool() {
    static std::vector<long> pool = [] {
        std::vector<long> ps;
        long p = (1L << 30) + 3;
        while ((long)ps.size() < 2048) {
            if (is_prime(p)) ps.push_back(p);
            p += 2;
        }
        return ps;
    }();
    return pool;
}
}  // namespace detail

// exact characteristic polynomial of an integer matrix via CRT over
// word-size primes with a Hadamard-type coefficient bound
inline std::vector<Int> charpoly(const imat& m) {
    assert(m.nr == m.nc);
    int n = m.nr;
    if (n == 0) return {Int(1)};
    Int maxabs = 0;
    for (auto& x : m.a) maxabs = std::max(maxabs, Int(abs(x)));
    if (maxabs == 0) maxabs = 1;
    // |c_k| <= binom(n,k) * (sqrt(k) * maxabs)^k;  take max over k
    Int bound = 1;
    for (int k = 1; k <= n; k++) {
        Int binom;
        mpz_bin_uiui(binom.get_mpz_t(), n, k);
        Int b = binom * pow_int((isqrt(Int(k)) + 1) * maxabs, k);
        bound = std::max(bound, b);
    }
    Int need = 2 * bound + 1;
    std::vector<Int> coeffs(n + 1, Int(0));
    Int modulus = 1;
    bool first = true;
    for (long p : detail::crt_prime_pool()) {
        auto cp = charpoly_mod(reduce_mod(m, (uint64_t)p));
        if (first) {
            for (int i = 0; i <= n; i++) coeffs[i] = Int((long)cp[i]);
            modulus = p;
            first = false;
        } else {
            for (int i = 0; i <= n; i++)
                coeffs[i] = crt_pair(coeffs[i], modulus, Int((long)cp[i]), Int(p));
            modulus *= p;
        }
        if (modulus > need) break;
    }
    if (modulus <= need) throw error("Internal", "charpoly: prime pool exhausted");
    for (auto& c : coeffs) c = signed_lift(c, modulus);
    return coeffs;
}

// charpoly of a rational matrix: scale by common denominator d, then
// chi_M(x) = chi_{dM}(d x) / d^n
inline std::vector<Rat> charpoly(const qmat& m) {
    auto [mi, d] = clear_denominators(m);
    auto ci = charpoly(mi);
    int n = m.nr;
    std::vector<Rat> c(n + 1);
    // coefficient of x^k in chi_M is ci[k] * d^k / d^n
    for (int k = 0; k <= n; k++) c[k] = make_rat(ci[k] * pow_int(d, k), pow_int(d, n));
    for (auto& x : c) x.canonicalize();
    return c;
}

}  // namespace omf
