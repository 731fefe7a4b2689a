#pragma once

// Automorphism groups and isometry testing for quinary lattices via
// backtracking over short-vector images (Plesken-Souvignier core):
// basis vector i may map to any vector of the same Q-value, pruned by
// pairwise inner-product compatibility with the images already placed.
// Groups here are small (<= 7680 = 2 * 2^5 * 5!), so the full element
// list is materialized and orbit computations are direct.

#include <iostream>
#include <optional>
#include <set>

#include "omf/lattice.hpp"

namespace omf {

constexpr long AUT_ORDER_LIMIT = 7680;

struct isometry_group {
    std::vector<imat> elements;    // all of O(L)
    std::vector<imat> generators;  // small generating set
    long order() const { return (long)elements.size(); }

    // SO(L) = proper isometries; in odd rank O(L) = SO(L) x {+-1}
    std::vector<imat> so_elements() const {
        std::vector<imat> so;
        for (auto& g : elements)
            if (det(g) == 1) so.push_back(g);
        return so;
    }
};

namespace detail {

struct iso_search {
    // find U with U^T A2 U = A1 (columns of U are images of the A1-basis)
    const imat& a1;
    const imat& a2;
    bool enumerate_all;
    std::vector<imat> found;

    std::array<int, RANK> order;  // basis indices sorted by increasing diagonal
    // candidates per basis index: vectors v (both signs) with v^T A2 v = a1(i,i)
    std::array<std::vector<vec5>, RANK> cands;
    std::array<std::vector<std::array<int64_t, RANK>>, RANK> cand_pair;  // A2 * v

    iso_search(const imat& a1_, const imat& a2_, bool all) : a1(a1_), a2(a2_), enumerate_all(all) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int i, int j) { return a1(i, i) < a1(j, j); });
    }

    bool prepare() {
        qlattice l2(a2);
        Int maxdiag = 0;
        for (int i = 0; i < RANK; i++) maxdiag = std::max(maxdiag, a1(i, i));
        auto sv = short_vectors(l2, maxdiag / 2);
        for (int i = 0; i < RANK; i++) {
            Int want = a1(i, i);
            for (auto& s : sv) {
                if (2 * s.q != want) continue;
                cands[i].push_back(s.x);
                vec5 neg;
                for (int k = 0; k < RANK; k++) neg[k] = -s.x[k];
                cands[i].push_back(neg);
            }
            if (cands[i].empty()) return false;
            for (auto& v : cands[i]) {
                std::array<int64_t, RANK> w{};
                for (int r = 0; r < RANK; r++)
                    for (int c = 0; c < RANK; c++) w[r] += a2(r, c).get_si() * v[c];
                cand_pair[i].push_back(w);
            }
        }
        return true;
    }

    std::array<int, RANK> chosen{};

    bool compatible(int level, int ci) {
        int i = order[level];
        auto& w = cand_pair[i][ci];
        for (int l = 0; l < level; l++) {
            int j = order[l];
            auto& u = cands[j][chosen[l]];
            int64_t dot = 0;
            for (int k = 0; k < RANK; k++) dot += w[k] * u[k];
            if (dot != a1(i, j).get_si()) return false;
        }
        return true;
    }

    bool rec(int level) {
        if (level == RANK) {
            imat u(RANK, RANK);
            for (int l = 0; l < RANK; l++) {
                int i = order[l];
                for (int r = 0; r < RANK; r++) u(r, i) = cands[i][chosen[l]][r];
            }
            // images span the full lattice only if det = +-1
            Int d = det(u);
            if (d == 1 || d == -1) {
                found.push_back(u);
                if (!enumerate_all) return true;
            }
            return false;
        }
        int i = order[level];
        for (int ci = 0; ci < (int)cands[i].size(); ci++) {
            if (!compatible(level, ci)) continue;
            chosen[level] = ci;
            if (rec(level + 1)) return true;
        }
        return false;
    }
};

inline std::vector<imat> greedy_generators(const std::vector<imat>& elements) {
    // grow a generating set until the closure is the whole group
    std::vector<imat> gens;
    std::vector<imat> closure = {imat::identity(RANK)};
    auto contains = [&](const imat& g) {
        return std::find(closure.begin(), closure.end(), g) != closure.end();
    };
    for (auto& g : elements) {
        if (contains(g)) continue;
        gens.push_back(g);
        // BFS closure under current generators
        size_t head = 0;
        closure.push_back(g);
        while (head < closure.size()) {
            imat x = closure[head++];
            for (auto& h : gens) {
                imat y = x * h;
                if (!contains(y)) closure.push_back(y);
            }
        }
        if (closure.size() == elements.size()) break;
    }
    return gens;
}

}  // namespace detail

inline isometry_group automorphism_group(const qlattice& l) {
    detail::iso_search s(l.gram, l.gram, true);
    if (!s.prepare()) throw error("Internal", "no candidates for automorphism search");
    s.rec(0);
    isometry_group g;
    g.elements = std::move(s.found);
    if (g.order() > AUT_ORDER_LIMIT)
        std::cerr << "[omf] diagnostic: automorphism group order " << g.order()
                  << " exceeds the rank-5 bound " << AUT_ORDER_LIMIT << "\n";
    g.generators = detail::greedy_generators(g.elements);
    return g;
}

// isometry L1 -> L2: returns U with U^T gram2 U = gram1, or nullopt.
// Fast-rejects on half-discriminant, theta prefix and Jordan symbols at
// p | 2N before the backtracking search.
inline std::optional<imat> is_isometric(const qlattice& l1, const qlattice& l2) {
    Int n1 = half_discriminant(l1);
    if (n1 != half_discriminant(l2)) return std::nullopt;
    Int b = 0;
    for (int i = 0; i < RANK; i++) b = std::max(b, std::max(l1.gram(i, i), l2.gram(i, i)));
    int theta_b = (int)Int(b / 2).get_si();
    if (theta_prefix(l1, theta_b) != theta_prefix(l2, theta_b)) return std::nullopt;
    for (auto& [p, e] : factorize(2 * n1))
        if (!same_jordan(jordan_symbol(l1, p), jordan_symbol(l2, p))) return std::nullopt;
    detail::iso_search s(l2.gram, l1.gram, false);  // columns live in l1-coordinates
    if (!s.prepare()) return std::nullopt;
    s.rec(0);
    if (s.found.empty()) return std::nullopt;
    // U^T gram1 U = gram2 maps l1 -> l2 basis-to-basis; return as stated
    return s.found[0];
}

// ---- mod-p projective orbit machinery (improvement: process an
// isotropic vector only when it is the lexicographic minimum of its
// orbit under Aut(L)) ----

using pvec = std::array<uint32_t, RANK>;

// canonical projective representative: first nonzero coordinate scaled to 1
inline pvec projective_canonical(pvec v, uint32_t p) {
    for (int i = 0; i < RANK; i++) {
        if (v[i] == 0) continue;
        uint64_t inv = mod_inv(v[i], p);
        for (int j = i; j < RANK; j++) v[j] = (uint32_t)(v[j] * inv % p);
        return v;
    }
    return v;
}

struct mod_p_group {
    uint32_t p;
    // SO(L) reduced mod p; projectively this covers all of O(L)
    std::vector<std::array<uint32_t, RANK * RANK>> mats;

    mod_p_group(const isometry_group& g, uint32_t pp) : p(pp) {
        for (auto& m : g.elements) {
            if (det(m) != 1) continue;
            std::array<uint32_t, RANK * RANK> r;
            for (int i = 0; i < RANK; i++)
                for (int j = 0; j < RANK; j++)
                    r[i * RANK + j] = (uint32_t)mod_long(m(i, j), (long)pp);
            mats.push_back(r);
        }
    }

    pvec apply(const std::array<uint32_t, RANK * RANK>& m, const pvec& v) const {
        pvec w{};
        for (int i = 0; i < RANK; i++) {
            uint64_t s = 0;
            for (int j = 0; j < RANK; j++) s += (uint64_t)m[i * RANK + j] * v[j];
            w[i] = (uint32_t)(s % p);
        }
        return projective_canonical(w, p);
    }
};

// v must already be in canonical projective form.  Returns (is lex
// minimum of its orbit, orbit size); orbit size is 0 on early exit.
inline std::pair<bool, long> orbit_is_minimal(const pvec& v, const mod_p_group& g) {
    std::set<pvec> orbit;
    orbit.insert(v);
    for (auto& m : g.mats) {
        pvec w = g.apply(m, v);
        if (w < v) return {false, 0};
        orbit.insert(w);
    }
    return {true, (long)orbit.size()};
}

// Fingerprint bound optimizer: alpha(B) is the expected number of
// classes sharing a theta-B-prefix, weighted by 1/#Aut (neighbor hit
// frequency is inversely proportional to #Aut).  Picks the smallest B
// minimizing alpha(B)*t_isom + t_theta(B).
inline int tune_fingerprint_bound(const std::vector<std::vector<Int>>& thetas,
                                  const std::vector<long>& aut_orders,
                                  const std::vector<double>& t_theta, double t_isom) {
    size_t h = thetas.size();
    if (h <= 1) return 0;
    int bmax = (int)t_theta.size() - 1;
    for (auto& t : thetas) bmax = std::min(bmax, (int)t.size());
    auto alpha = [&](int b) {
        double num = 0, den = 0;
        for (size_t i = 0; i < h; i++) {
            double w = 1.0 / (double)aut_orders[i];
            long coll = 0;
            for (size_t j = 0; j < h; j++) {
                bool eq = true;
                for (int k = 0; k < b && eq; k++) eq = thetas[i][k] == thetas[j][k];
                if (eq) coll++;
            }
            num += w * (double)coll;
            den += w;
        }
        return num / den;
    };
    int best_b = 0;
    double best_cost = alpha(0) * t_isom + t_theta[0];
    for (int b = 1; b <= bmax; b++) {
        double c = alpha(b) * t_isom + t_theta[b];
        if (c < best_cost) { best_cost = c; best_b = b; }
    }
    return best_b;
}

}  // namespace omf
