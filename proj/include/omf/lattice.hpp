#pragma once

// Rank-5 integral lattices.  A lattice is stored as its bilinear Gram
// matrix A (symmetric, even diagonal, positive definite) with quadratic
// form Q(x) = x^T A x / 2, so Q is Z-valued and det A = 2N with N the
// half-discriminant.  Short vector enumeration is Fincke-Pohst on an
// exact rational LDL^T decomposition; no floating point anywhere.

#include <array>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "omf/matrix.hpp"

namespace omf {

constexpr int RANK = 5;

using vec5 = std::array<int64_t, RANK>;

struct qlattice {
    imat gram;  // 5x5
    std::string label;

    qlattice() : gram(RANK, RANK) {}
    explicit qlattice(imat g, std::string lab = "") : gram(std::move(g)), label(std::move(lab)) {
        validate();
    }

    void validate() const {
        if (gram.nr != RANK || gram.nc != RANK)
            throw error("BadLattice", "gram must be 5x5");
        for (int i = 0; i < RANK; i++) {
            if (gram(i, i) % 2 != 0)
                throw error("BadLattice", "diagonal must be even (integral quadratic form)");
            for (int j = 0; j < i; j++)
                if (gram(i, j) != gram(j, i)) throw error("BadLattice", "gram not symmetric");
        }
        // positive definite: successive leading principal minors > 0
        for (int k = 1; k <= RANK; k++) {
            imat sub(k, k);
            for (int i = 0; i < k; i++)
                for (int j = 0; j < k; j++) sub(i, j) = gram(i, j);
            if (det(sub) <= 0) throw error("BadLattice", "gram not positive definite");
        }
    }

    Int q(const vec5& x) const {
        Int s = 0;
        for (int i = 0; i < RANK; i++) {
            if (x[i] == 0) continue;
            s += gram(i, i) * (x[i] * x[i]);
            for (int j = i + 1; j < RANK; j++) s += 2 * gram(i, j) * (x[i] * x[j]);
        }
        return s / 2;
    }

    Int t(const vec5& x, const vec5& y) const {
        Int s = 0;
        for (int i = 0; i < RANK; i++)
            for (int j = 0; j < RANK; j++) s += gram(i, j) * (x[i] * y[j]);
        return s;
    }

    bool operator==(const qlattice& o) const { return gram == o.gram; }
};

inline Int half_discriminant(const qlattice& l) {
    Int d = det(l.gram);
    if (d % 2 != 0) throw non_integral("det(gram) is odd; wrong normalization");
    return d / 2;
}

struct short_vector {
    vec5 x;
    Int q;
};

namespace detail {

// exact test  t <= c + sqrt(r)  for rationals c, r >= 0
inline bool le_c_plus_sqrt(const Int& t, const Rat& c, const Rat& r) {
    Rat d = Rat(t) - c;
    if (d <= 0) return true;
    return d * d <= r;
}

// floor(c + sqrt(r)) for r >= 0
inline Int floor_c_plus_sqrt(const Rat& c, const Rat& r) {
    // initial estimate from truncated integer sqrt, then exact fixup
    Int num = r.get_num(), den = r.get_den();
    Int s = isqrt(num / den) + 1;
    Int cf;
    mpz_fdiv_q(cf.get_mpz_t(), c.get_num().get_mpz_t(), c.get_den().get_mpz_t());
    Int t = cf + s + 1;
    while (!le_c_plus_sqrt(t, c, r)) t -= 1;
    while (le_c_plus_sqrt(t + 1, c, r)) t += 1;
    return t;
}

// ceil(c - sqrt(r))
inline Int ceil_c_minus_sqrt(const Rat& c, const Rat& r) {
    return -floor_c_plus_sqrt(-c, r);
}

struct ldl {
    std::array<Rat, RANK> d;
    std::array<std::array<Rat, RANK>, RANK> mu;  // mu[i][j], j > i

    explicit ldl(const imat& a) {
        std::array<std::array<Rat, RANK>, RANK> w;
        for (int i = 0; i < RANK; i++)
            for (int j = 0; j < RANK; j++) w[i][j] = Rat(a(i, j));
        for (int i = 0; i < RANK; i++) {
            d[i] = w[i][i];
            for (int j = i + 1; j < RANK; j++) mu[i][j] = w[i][j] / d[i];
            for (int j = i + 1; j < RANK; j++)
                for (int k = j; k < RANK; k++) w[j][k] -= mu[i][j] * mu[i][k] * d[i];
        }
    }
};

}  // namespace detail

// All x with 0 < Q(x) <= bound, exactly one of +-x (the lexicographically
// larger one, i.e. first nonzero coordinate positive), sorted lex.
inline std::vector<short_vector> short_vectors(const qlattice& l, const Int& bound) {
    std::vector<short_vector> out;
    if (bound <= 0) return out;
    detail::ldl dec(l.gram);
    Rat budget = Rat(2 * bound);  // x^T A x = 2 Q(x)
    vec5 x{};
    std::array<Rat, RANK> center;
    std::array<Rat, RANK> rem;  // remaining budget at each level

    std::function<void(int, const Rat&)> rec = [&](int i, const Rat& r) {
        if (i < 0) {
            Int qv = l.q(x);
            if (qv > 0 && qv <= bound) {
                // keep one representative of +-x
                vec5 v = x;
                for (int k = 0; k < RANK; k++) {
                    if (v[k] == 0) continue;
                    if (v[k] < 0)
                        for (int t = 0; t < RANK; t++) v[t] = -v[t];
                    break;
                }
                if (v == x) out.push_back({x, qv});
            }
            return;
        }
        Rat c = 0;
        for (int j = i + 1; j < RANK; j++) c += dec.mu[i][j] * Rat(x[j]);
        Rat rr = r / dec.d[i];
        Int lo = detail::ceil_c_minus_sqrt(-c, rr);
        Int hi = detail::floor_c_plus_sqrt(-c, rr);
        for (Int v = lo; v <= hi; v += 1) {
            x[i] = v.get_si();
            Rat y = Rat(v) + c;
            rec(i - 1, r - dec.d[i] * y * y);
        }
        x[i] = 0;
    };
    rec(RANK - 1, budget);
    std::sort(out.begin(), out.end(),
              [](const short_vector& a, const short_vector& b) { return a.x < b.x; });
    return out;
}

// representation numbers r(1..B) counting both +-x
inline std::vector<Int> theta_prefix(const qlattice& l, int bound) {
    std::vector<Int> r(bound, Int(0));
    for (auto& sv : short_vectors(l, Int(bound))) r[sv.q.get_si() - 1] += 2;
    return r;
}

struct reduction {
    qlattice lat;
    imat u;  // u^T gram u = lat.gram
};

namespace detail {

inline imat conjugate(const imat& gram, const imat& u) {
    return u.transpose() * gram * u;
}

inline bool gram_lex_less(const imat& a, const imat& b) {
    return std::lexicographical_compare(a.a.begin(), a.a.end(), b.a.begin(), b.a.end());
}

}  // namespace detail

// Greedy Minkowski-style reduction: sort by diagonal, size-reduce
// off-diagonal entries, repeat to a fixpoint; then canonicalize over
// sign flips and permutations of equal-diagonal runs by lexicographic
// Gram comparison.  Deterministic, idempotent on its own output.
inline reduction reduce(const qlattice& l) {
    imat g = l.gram;
    imat u = imat::identity(RANK);
    auto apply_colop = [&](int j, int i, const Int& q) {
        // b_j <- b_j - q b_i
        for (int r = 0; r < RANK; r++) u(r, j) -= q * u(r, i);
        for (int r = 0; r < RANK; r++) g(r, j) -= q * g(r, i);
        for (int c = 0; c < RANK; c++) g(j, c) -= q * g(i, c);
    };
    auto swap_cols = [&](int i, int j) {
        for (int r = 0; r < RANK; r++) std::swap(u(r, i), u(r, j));
        for (int r = 0; r < RANK; r++) std::swap(g(r, i), g(r, j));
        for (int c = 0; c < RANK; c++) std::swap(g(i, c), g(j, c));
    };
    for (int pass = 0; pass < 200; pass++) {
        bool changed = false;
        // bubble the diagonal into nondecreasing order (stable)
        for (int i = 0; i + 1 < RANK; i++)
            for (int j = 0; j + 1 < RANK - i; j++)
                if (g(j + 1, j + 1) < g(j, j)) { swap_cols(j, j + 1); changed = true; }
        // size-reduce
        for (int i = 0; i < RANK; i++)
            for (int j = 0; j < RANK; j++) {
                if (i == j) continue;
                // nearest integer to g(i,j)/g(i,i)
                Int q;
                Int num = 2 * g(i, j) + g(i, i);
                Int den = 2 * g(i, i);
                mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
                if (q != 0) { apply_colop(j, i, q); changed = true; }
            }
        if (!changed) break;
    }
    // canonicalize: permutations within equal-diagonal runs x sign flips
    std::vector<std::vector<int>> runs;
    for (int i = 0; i < RANK; i++) {
        if (!runs.empty() && g(runs.back().back(), runs.back().back()) == g(i, i))
            runs.back().push_back(i);
        else
            runs.push_back({i});
    }
    imat best = g;
    imat best_u = imat::identity(RANK);
    std::vector<int> perm(RANK);
    std::function<void(size_t)> try_perms = [&](size_t ri) {
        if (ri == runs.size()) {
            imat p(RANK, RANK);
            for (int j = 0; j < RANK; j++) p(perm[j], j) = 1;
            imat gp = detail::conjugate(g, p);
            // greedy sign choice then full search over patterns (first sign fixed)
            for (int mask = 0; mask < (1 << (RANK - 1)); mask++) {
                imat s(RANK, RANK);
                s(0, 0) = 1;
                for (int j = 1; j < RANK; j++) s(j, j) = (mask >> (j - 1)) & 1 ? -1 : 1;
                imat cand = detail::conjugate(gp, s);
                if (detail::gram_lex_less(cand, best)) { best = cand; best_u = p * s; }
            }
            return;
        }
        std::vector<int> run = runs[ri];
        std::sort(run.begin(), run.end());
        do {
            for (size_t k = 0; k < run.size(); k++) perm[runs[ri][k]] = run[k];
            try_perms(ri + 1);
        } while (std::next_permutation(run.begin(), run.end()));
    };
    try_perms(0);
    reduction res;
    res.lat = qlattice(best, l.label);
    res.u = u * best_u;
    return res;
}

struct jordan_block {
    int scale;       // p-valuation of the block scale
    int rank;
    int unit_class;  // odd p: Legendre symbol of the unit determinant (+-1);
                     // p = 2: 1 if the block has a diagonal entry of exact
                     // valuation `scale` (odd norm), else 0
};

struct jordan_data {
    Int p;
    std::vector<jordan_block> blocks;  // scales strictly increasing
};

// p-adic Jordan decomposition invariants of the bilinear Gram matrix.
inline jordan_data jordan_symbol(const qlattice& l, const Int& p) {
    if (!is_prime(p)) throw error("BadLattice", "jordan_symbol: p must be prime");
    int n = RANK;
    qmat w = to_q(l.gram);
    auto val = [&](const Rat& x) -> int {
        if (x == 0) return 1 << 20;
        Int num = x.get_num(), den = x.get_den();
        int v = 0;
        while (num % p == 0) { num /= p; v++; }
        while (den % p == 0) { den /= p; v--; }
        return v;
    };
    std::vector<int> alive(n);
    std::iota(alive.begin(), alive.end(), 0);
    // collected (scale, unit-part) of 1x1 pieces and (scale, type-II) 2x2 pieces
    std::vector<std::pair<int, Rat>> ones;
    std::vector<std::pair<int, Rat>> twos;  // scale, det/p^(2scale)
    while (!alive.empty()) {
        // minimal valuation entry among alive rows/cols, diagonal preferred
        int best_v = 1 << 20, bi = -1, bj = -1;
        for (int i : alive) {
            int v = val(w(i, i));
            if (v < best_v) { best_v = v; bi = i; bj = i; }
        }
        for (int i : alive)
            for (int j : alive) {
                if (i >= j) continue;
                int v = val(w(i, j));
                if (v < best_v) { best_v = v; bi = i; bj = j; }
            }
        if (bi < 0) throw error("BadLattice", "jordan_symbol: degenerate form");
        if (bi != bj && p != 2) {
            // odd p: e_i += e_j turns the minimal entry onto the diagonal
            for (int c = 0; c < n; c++) w(bi, c) += w(bj, c);
            for (int r = 0; r < n; r++) w(r, bi) += w(r, bj);
            bj = bi;
        }
        if (bi == bj) {
            // split off 1x1
            for (int r : alive) {
                if (r == bi) continue;
                Rat f = w(r, bi) / w(bi, bi);
                if (f == 0) continue;
                for (int c = 0; c < n; c++) w(r, c) -= f * w(bi, c);
                for (int c = 0; c < n; c++) w(c, r) -= f * w(c, bi);
            }
            Rat u = w(bi, bi) / Rat(pow_int(p, best_v));
            ones.push_back({best_v, u});
            alive.erase(std::find(alive.begin(), alive.end(), bi));
        } else {
            // p = 2 with off-diagonal minimum: split off the 2x2 block
            int i = bi, j = bj;
            qmat b(2, 2);
            b(0, 0) = w(i, i); b(0, 1) = w(i, j); b(1, 0) = w(j, i); b(1, 1) = w(j, j);
            qmat binv = inverse(b);
            for (int r : alive) {
                if (r == i || r == j) continue;
                // subtract projection onto span(e_i, e_j)
                Rat pi = w(r, i), pj = w(r, j);
                Rat ci = binv(0, 0) * pi + binv(0, 1) * pj;
                Rat cj = binv(1, 0) * pi + binv(1, 1) * pj;
                if (ci == 0 && cj == 0) continue;
                for (int c = 0; c < n; c++) w(r, c) -= ci * w(i, c) + cj * w(j, c);
                for (int c = 0; c < n; c++) w(c, r) -= ci * w(c, i) + cj * w(c, j);
            }
            Rat dd = (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)) / Rat(pow_int(p, 2 * best_v));
            twos.push_back({best_v, dd});
            alive.erase(std::find(alive.begin(), alive.end(), j));
            alive.erase(std::find(alive.begin(), alive.end(), i));
        }
    }
    // aggregate by scale
    std::map<int, std::pair<int, std::pair<Rat, bool>>> agg;  // scale -> (rank, (unit det prod, has_odd_diag))
    for (auto& [s, u] : ones) {
        auto& e = agg[s];
        e.first += 1;
        if (e.second.first == 0) e.second.first = 1;
        e.second.first *= u;
        e.second.second = true;  // 1x1 at this scale means odd-norm diagonal for p=2
    }
    for (auto& [s, dd] : twos) {
        auto& e = agg[s];
        e.first += 2;
        if (e.second.first == 0) e.second.first = 1;
        e.second.first *= dd;
    }
    jordan_data jd;
    jd.p = p;
    for (auto& [s, e] : agg) {
        jordan_block b;
        b.scale = s;
        b.rank = e.first;
        if (p == 2) {
            b.unit_class = e.second.second ? 1 : 0;
        } else {
            Rat u = e.second.first;
            Int num = u.get_num() * u.get_den();  // same square class
            b.unit_class = legendre(num, p);
        }
        jd.blocks.push_back(b);
    }
    return jd;
}

inline bool operator==(const jordan_block& a, const jordan_block& b) {
    return a.scale == b.scale && a.rank == b.rank && a.unit_class == b.unit_class;
}

inline bool same_jordan(const jordan_data& a, const jordan_data& b) {
    return a.p == b.p && a.blocks.size() == b.blocks.size() &&
           std::equal(a.blocks.begin(), a.blocks.end(), b.blocks.begin());
}

// ---- .gram file format: 5 lines of 5 space-separated integers ----

inline qlattice read_gram(std::istream& in, const std::string& label = "") {
    imat g(RANK, RANK);
    for (int i = 0; i < RANK; i++)
        for (int j = 0; j < RANK; j++) {
            std::string tok;
            if (!(in >> tok)) throw error("BadFile", "gram file truncated");
            g(i, j) = Int(tok);
        }
    return qlattice(g, label);
}

inline qlattice read_gram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("BadFile", "cannot open " + path);
    return read_gram(in, path);
}

inline void write_gram(std::ostream& out, const qlattice& l) {
    for (int i = 0; i < RANK; i++) {
        for (int j = 0; j < RANK; j++) out << (j ? " " : "") << l.gram(i, j);
        out << "\n";
    }
}

}  // namespace omf
