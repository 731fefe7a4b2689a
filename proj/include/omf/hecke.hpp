#pragma once

// Hecke operators T_{p,1} (point neighbors) and T_{p,2} (plane
// neighbors) on the twisted invariant spaces over the class set.
//
// Stored matrix convention: entry block (m, j) accumulates the neighbors
// of class j that classify to class m, so in trivial weight with trivial
// character every column sums to the neighbor count and the vector
// (1/#SO(L_i))_i is a right eigenvector for that count.
//
// Per source class j the sum runs over Aut(L_j)-orbit representatives of
// isotropic points (planes); each contributes
//     orbit_size * chi(G) * rho(G^{-1}) . (basis of class m)
// where G is the classification witness carrying the neighbor onto its
// representative; the character-averaging projector of class j is applied
// once at the end.  This equals the full unpruned sum because the
// stabilizer of a point fixes the neighbor.

#include <thread>

#include "omf/weights.hpp"

namespace omf {

// fixed (genus, weight, character) context shared by all Hecke operators
struct space_context {
    const genus_data* genus = nullptr;
    weight_rep w;
    radical_character chi;
    std::vector<qmat> bases;               // D x k_i echelon bases
    std::vector<std::vector<int>> pivots;  // pivot rows per class basis
    std::vector<qmat> projectors;          // D x D averaging projectors
    std::vector<int> dims;
    int total_dim = 0;
    qmat a0_inv;

    int classes() const { return (int)genus->size(); }
};

inline space_context make_space(const genus_data& g, int a, int b, const Int& d) {
    space_context s;
    s.genus = &g;
    s.w = make_weight_rep(a, b, g.ambient_gram());
    s.chi = radical_character(g.ambient_gram(), d);
    s.a0_inv = inverse(to_q(g.ambient_gram()));
    for (int i = 0; i < (int)g.size(); i++) {
        qmat basis = invariant_basis(g, i, s.w, s.chi);
        s.bases.push_back(basis);
        s.dims.push_back(basis.nc);
        s.total_dim += basis.nc;
        std::vector<int> piv;
        for (int c = 0; c < basis.nc; c++)
            for (int r = 0; r < basis.nr; r++)
                if (basis(r, c) != 0) { piv.push_back(r); break; }
        s.pivots.push_back(piv);
        // averaging projector of class i (identity in trivial weight with
        // trivial character)
        if (s.w.trivial() && s.chi.trivial()) {
            s.projectors.push_back(qmat::identity(1));
        } else {
            const genus_class& cls = g.classes[i];
            qmat proj(s.w.dim, s.w.dim);
            long so = 0;
            for (auto& m : cls.aut.elements) {
                if (det(m) != 1) continue;
                so++;
                qmat amb = cls.conjugator * to_q(m) * cls.conjugator_inv;
                Rat c(s.chi.trivial() ? 1 : s.chi.value(amb));
                if (s.w.trivial()) {
                    proj(0, 0) += c;
                } else {
                    qmat rg = s.w(amb);
                    for (int r = 0; r < s.w.dim; r++)
                        for (int cc = 0; cc < s.w.dim; cc++) proj(r, cc) += c * rg(r, cc);
                }
            }
            for (auto& x : proj.a) x /= so;
            s.projectors.push_back(std::move(proj));
        }
    }
    return s;
}

struct hecke_matrix_t {
    Int level;
    std::pair<int, int> weight_ab;
    Int d;
    long p = 0;
    int index = 1;  // 1 = point neighbors, 2 = plane neighbors
    bool bad = false;
    std::vector<int> block_dims;
    qmat mat;
};

struct hecke_options {
    int workers = 1;
    bool orbit_pruning = true;
    bool use_fingerprint = true;
};

namespace detail {

// coordinates of a vector against an echelon basis (unit pivot rows)
inline std::vector<Rat> basis_coordinates(const qmat& basis, const std::vector<int>& pivots,
                                          std::vector<Rat> y) {
    std::vector<Rat> c(basis.nc);
    for (int b = 0; b < basis.nc; b++) {
        Rat v = y[pivots[b]];
        c[b] = v;
        if (v != 0)
            for (int r = 0; r < basis.nr; r++) y[r] -= v * basis(r, b);
    }
    for (auto& r : y)
        if (r != 0) throw error("Internal", "vector not in invariant subspace");
    return c;
}

struct neighbor_task {
    pvec point;       // index-1 neighbors
    plane pl;         // index-2 neighbors
    long orbit_size;
};

}  // namespace detail

// Assemble one Hecke matrix.  `which` selects point (1) or plane (2)
// neighbors; `use_bad_points` switches to the p || N point set.  At a bad
// prime the witnesses have denominators at p, so the p-component of the
// character cannot be read off the witness; it is dropped there (the
// operator is used for Euler data at that same p, where the sign enters
// through the Atkin-Lehner rule instead).
inline hecke_matrix_t hecke_matrix(const space_context& s, long p, int which,
                                   hecke_options opt = {}, bool use_bad_points = false) {
    const genus_data& g = *s.genus;
    if (!use_bad_points && g.level % p == 0) throw bad_prime("hecke_matrix: p | N");
    const radical_character* chi = &s.chi;
    radical_character chi_dropped;
    if (use_bad_points && s.chi.d % p == 0) {
        Int d2 = s.chi.d / p;
        chi_dropped = radical_character(g.ambient_gram(), d2);
        chi = &chi_dropped;
    }
    hecke_matrix_t out;
    out.level = g.level;
    out.weight_ab = {s.w.a, s.w.b};
    out.d = s.chi.d;
    out.p = p;
    out.index = which;
    out.bad = use_bad_points;
    out.block_dims = s.dims;
    out.mat = qmat(s.total_dim, s.total_dim);
    std::vector<int> offset(g.size() + 1, 0);
    for (size_t i = 0; i < g.size(); i++) offset[i + 1] = offset[i] + s.dims[i];

    for (int j = 0; j < (int)g.size(); j++) {
        if (s.dims[j] == 0) continue;
        const genus_class& cls = g.classes[j];
        // orbit representatives of the point/plane set
        std::vector<detail::neighbor_task> tasks;
        mod_p_group action(cls.aut, (uint32_t)p);
        if (which == 1) {
            auto pts = use_bad_points ? bad_isotropic_points(cls.lat, p) : isotropic_points(cls.lat, p);
            for (auto& x : pts) {
                if (opt.orbit_pruning) {
                    auto [minimal, osize] = orbit_is_minimal(x, action);
                    if (!minimal) continue;
                    tasks.push_back({x, plane{}, osize});
                } else {
                    tasks.push_back({x, plane{}, 1});
                }
            }
        } else {
            if (use_bad_points) throw bad_prime("plane neighbors only at good p");
            auto pls = isotropic_planes(cls.lat, p);
            for (auto& pl : pls) {
                if (opt.orbit_pruning) {
                    // lex-min canonical plane of its orbit
                    bool minimal = true;
                    std::set<plane> orbit = {pl};
                    for (auto& m : action.mats) {
                        pvec r1{}, r2{};
                        for (int r = 0; r < RANK; r++) {
                            uint64_t s1 = 0, s2 = 0;
                            for (int c = 0; c < RANK; c++) {
                                s1 += (uint64_t)m[r * RANK + c] * pl.r1[c];
                                s2 += (uint64_t)m[r * RANK + c] * pl.r2[c];
                            }
                            r1[r] = (uint32_t)(s1 % (uint32_t)p);
                            r2[r] = (uint32_t)(s2 % (uint32_t)p);
                        }
                        plane img = detail::plane_canonical(r1, r2, (uint32_t)p);
                        if (img < pl) { minimal = false; break; }
                        orbit.insert(img);
                    }
                    if (!minimal) continue;
                    tasks.push_back({pvec{}, pl, (long)orbit.size()});
                } else {
                    tasks.push_back({pvec{}, pl, 1});
                }
            }
        }

        // per-target accumulators: D x k_m
        int nw = std::max(1, opt.workers);
        std::vector<std::vector<qmat>> partial(nw);
        for (int t = 0; t < nw; t++) {
            partial[t].resize(g.size());
            for (size_t m = 0; m < g.size(); m++)
                if (s.dims[m] > 0) partial[t][m] = qmat(s.w.dim, s.dims[m]);
        }
        auto work = [&](int tid) {
            for (size_t ti = tid; ti < tasks.size(); ti += nw) {
                auto& task = tasks[ti];
                long nvariants = which == 1 ? 1 : p;  // p distinct neighbors per plane
                for (long variant = 0; variant < nvariants; variant++) {
                    neighbor_result nb = which == 1 ? p_neighbor(cls.lat, task.point, p)
                                                    : p2_neighbor(cls.lat, task.pl, p, variant);
                    qmat ambient_basis = cls.conjugator * nb.basis;
                    auto res = classify(g, ambient_basis, nb.gram, opt.use_fingerprint);
                    int m = res.index;
                    if (s.dims[m] == 0) continue;
                    Rat cval(task.orbit_size);
                    if (!chi->trivial()) cval *= chi->value(res.witness);
                    if (s.w.trivial()) {
                        partial[tid][m](0, 0) += cval;
                    } else {
                        // rho(G^{-1}) with G^{-1} = A0^{-1} G^T A0
                        qmat ginv = s.a0_inv * res.witness.transpose() * to_q(g.ambient_gram());
                        qmat rg = s.w(ginv);
                        partial[tid][m] = partial[tid][m] + rg * s.bases[m] * cval;
                    }
                }
            }
        };
        if (nw == 1) {
            work(0);
        } else {
            std::vector<std::thread> threads;
            for (int t = 0; t < nw; t++) threads.emplace_back(work, t);
            for (auto& th : threads) th.join();
        }
        // merge in worker order, project, extract coordinates
        for (size_t m = 0; m < g.size(); m++) {
            if (s.dims[m] == 0) continue;
            qmat acc = partial[0][m];
            for (int t = 1; t < nw; t++) acc = acc + partial[t][m];
            if (s.w.trivial() && s.chi.trivial()) {
                // 1x1 blocks: the value is already the coefficient
                out.mat(offset[m], offset[j]) += acc(0, 0);
                continue;
            }
            if (acc.is_zero()) continue;
            qmat projected = s.projectors[j] * acc;
            for (int c = 0; c < s.dims[m]; c++) {
                std::vector<Rat> y = projected.col(c);
                auto coords = detail::basis_coordinates(s.bases[j], s.pivots[j], std::move(y));
                for (int r = 0; r < s.dims[j]; r++) out.mat(offset[m] + c, offset[j] + r) = coords[r];
            }
        }
    }
    return out;
}

inline hecke_matrix_t hecke_matrix_bad(const space_context& s, long p, hecke_options opt = {}) {
    const genus_data& g = *s.genus;
    if (g.level % p != 0 || g.level % (Int(p) * p) == 0)
        throw bad_prime("hecke_matrix_bad requires p || N");
    return hecke_matrix(s, p, 1, opt, true);
}

}  // namespace omf
