#pragma once

// Genus (class set) enumeration: BFS closure under q-neighbors at one
// good prime q, with isometry classification against the discovered
// representatives.  Every representative is produced by neighbor steps
// at primes away from 2N, so all representatives share the seed's
// localizations at p | 2N; radical characters are then defined on every
// classification witness without further adjustment.

#include <chrono>

#include "omf/neighbors.hpp"

namespace omf {

constexpr int THETA_CACHE = 6;

struct genus_class {
    qlattice lat;             // reduced Gram
    isometry_group aut;       // O(lat)
    std::vector<Int> theta;   // prefix r(1..THETA_CACHE)
    qmat conjugator;          // columns: basis of this class in the ambient space
    qmat conjugator_inv;
    long so_order() const { return aut.order() / 2; }
};

struct genus_data {
    Int level;  // half-discriminant N
    std::vector<genus_class> classes;
    long seed_prime = 0;
    int fingerprint_bound = 1;
    double t_isom = 0, t_theta1 = 0;  // measured costs behind the tuned bound

    const imat& ambient_gram() const { return classes[0].lat.gram; }
    size_t size() const { return classes.size(); }
};

struct classify_result {
    int index;
    qmat witness;  // g in SO(V) with g(input lattice) = class representative
};

namespace detail {

inline bool theta_prefix_matches(const std::vector<Int>& a, const std::vector<Int>& b, int upto) {
    for (int i = 0; i < upto && i < (int)a.size() && i < (int)b.size(); i++)
        if (a[i] != b[i]) return false;
    return true;
}

struct class_match {
    int index;
    imat u;       // u^T gram_index u = reduced gram
    imat red_u;   // reduction transform of the input gram
};

// isometry classification without witness assembly
inline std::optional<class_match> find_class(const genus_data& g, const imat& gram,
                                             bool use_fingerprint = true) {
    auto red = reduce(qlattice(gram));
    std::vector<Int> theta;
    int b = use_fingerprint ? g.fingerprint_bound : 0;
    if (b > 0) theta = theta_prefix(red.lat, b);
    for (int m = 0; m < (int)g.size(); m++) {
        const genus_class& cls = g.classes[m];
        if (b > 0 && !theta_prefix_matches(theta, cls.theta, b)) continue;
        auto u = is_isometric(cls.lat, red.lat);
        if (!u) continue;
        return class_match{m, *u, red.u};
    }
    return std::nullopt;
}

}  // namespace detail

// Classify a lattice given by an ambient basis (columns; gram must equal
// basis^T A0 basis) into the genus.  Returns the class index and a
// proper-isometry witness mapping the input lattice onto the
// representative.  Throws NotInGenus when nothing matches.
inline classify_result classify(const genus_data& g, const qmat& ambient_basis, const imat& gram,
                                bool use_fingerprint = true) {
    auto m = detail::find_class(g, gram, use_fingerprint);
    if (!m) throw not_in_genus("no representative matches");
    // bases (ambient_basis * red_u) and (conjugator * u) carry equal grams,
    // so the transporter below is an isometry of the ambient form
    qmat bn = ambient_basis * to_q(m->red_u);
    qmat cm = g.classes[m->index].conjugator * to_q(m->u);
    qmat w = cm * inverse(bn);
    if (det(w) == -1) w = -w;
    return classify_result{m->index, std::move(w)};
}

namespace detail {

inline genus_class make_class(qlattice lat, qmat conj) {
    genus_class c;
    c.lat = std::move(lat);
    c.aut = automorphism_group(c.lat);
    c.theta = theta_prefix(c.lat, THETA_CACHE);
    c.conjugator = std::move(conj);
    c.conjugator_inv = inverse(c.conjugator);
    return c;
}

}  // namespace detail

inline long smallest_good_prime(const Int& n) {
    for (long q = 2;; q++)
        if (is_prime(q) && n % q != 0) return q;
}

// BFS closure of the seed under q-neighbors up to isometry.  Discovery
// order is deterministic: classes in FIFO order, points in canonical
// lexicographic order, orbit representatives only.
inline genus_data enumerate_genus(const qlattice& seed, long q = 0) {
    Int n = half_discriminant(seed);
    if (q == 0) q = smallest_good_prime(n);
    if (n % q == 0) throw bad_prime("enumerate_genus: q divides N");
    genus_data g;
    g.level = n;
    g.seed_prime = q;
    g.fingerprint_bound = THETA_CACHE;
    auto red0 = reduce(seed);
    g.classes.push_back(detail::make_class(red0.lat, qmat::identity(RANK)));

    double isom_time = 0;
    long isom_count = 0;
    for (size_t j = 0; j < g.classes.size(); j++) {
        qlattice lat = g.classes[j].lat;  // snapshot: classes vector grows
        qmat conj = g.classes[j].conjugator;
        mod_p_group action(g.classes[j].aut, (uint32_t)q);
        auto pts = isotropic_points(lat, q);
        for (auto& x : pts) {
            auto [minimal, osize] = orbit_is_minimal(x, action);
            if (!minimal) continue;
            auto nb = p_neighbor(lat, x, q);
            auto t0 = std::chrono::steady_clock::now();
            auto match = detail::find_class(g, nb.gram);
            isom_time += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            isom_count++;
            if (!match) {
                auto red = reduce(qlattice(nb.gram));
                g.classes.push_back(
                    detail::make_class(red.lat, conj * nb.basis * to_q(red.u)));
            }
        }
    }
    for (size_t i = 0; i < g.classes.size(); i++)
        g.classes[i].lat.label = n.get_str() + "#" + std::to_string(i);

    // all representatives share the local data at p | 2N
    for (auto& [p, e] : factorize(2 * n)) {
        auto j0 = jordan_symbol(g.classes[0].lat, p);
        for (auto& c : g.classes)
            if (!same_jordan(j0, jordan_symbol(c.lat, p)))
                throw error("Internal", "genus classes disagree locally at " + p.get_str());
    }

    // tune the fingerprint bound from measured costs
    std::vector<std::vector<Int>> thetas;
    std::vector<long> orders;
    for (auto& c : g.classes) {
        thetas.push_back(c.theta);
        orders.push_back(c.aut.order());
    }
    std::vector<double> t_theta(THETA_CACHE + 1, 0.0);
    for (int b = 1; b <= THETA_CACHE; b++) {
        auto t0 = std::chrono::steady_clock::now();
        for (auto& c : g.classes) theta_prefix(c.lat, b);
        t_theta[b] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
                     (double)g.size();
    }
    double t_isom = isom_count ? isom_time / (double)isom_count : 1.0;
    g.t_isom = t_isom;
    g.t_theta1 = t_theta[1];
    g.fingerprint_bound = tune_fingerprint_bound(thetas, orders, t_theta, t_isom);
    return g;
}

// ---- bounded search for lattices of a given half-discriminant ----

// 4-dim quotient form at p || N: split iff its determinant is a square
// mod p; the quotient quadric then has (p+1)^2 rather than p^2+1 points.
inline bool quotient_is_nonsplit(const qlattice& l, long p) {
    auto jd = jordan_symbol(l, p);
    if (jd.blocks.size() != 2 || jd.blocks[0].scale != 0 || jd.blocks[0].rank != 4 ||
        jd.blocks[1].scale != 1 || jd.blocks[1].rank != 1)
        throw bad_prime("quotient_is_nonsplit: expected unimodular rank 4 + p-scaled rank 1");
    return jd.blocks[0].unit_class == -1;
}

struct search_bounds {
    Int diag_bound = 0;   // 0: use 2*ceil((2N)^(1/5)) + 6
    int diag_product_factor = 18;  // Minkowski: prod(diag) <= ~17.8 * det in rank 5
};

// Enumerate even positive definite quinary Gram matrices with det = 2N
// inside size-reduction bounds, group them by genus via neighbor-closure
// identity, and return one reduced representative per genus.
inline std::vector<qlattice> genus_search(const Int& n, long p0, search_bounds bounds = {}) {
    if (n <= 0) throw error("BadInput", "need N > 0");
    if (mod_long(n, p0) != 0 || mod_long(n, p0 * p0) == 0)
        throw bad_prime("genus_search: need p0 || N");
    Int target = 2 * n;
    Int diag_bound = bounds.diag_bound;
    if (diag_bound == 0) {
        Int root;
        mpz_root(root.get_mpz_t(), target.get_mpz_t(), 5);
        if (pow_int(root, 5) < target) root += 1;
        diag_bound = 2 * root + 6;
    }
    Int prod_cutoff = target * bounds.diag_product_factor;
    std::vector<qlattice> found;
    std::array<long, RANK> diag{};
    long db = diag_bound.get_si();
    std::function<void(int, long, Int)> diag_rec = [&](int i, long lo, Int prod) {
        if (i == RANK) {
            if (prod < target || prod > prod_cutoff) return;
            imat a(RANK, RANK);
            for (int k = 0; k < RANK; k++) a(k, k) = diag[k];
            std::function<void(int)> col_rec = [&](int j) {
                if (j == RANK) {
                    if (det(a) == target) found.push_back(reduce(qlattice(a)).lat);
                    return;
                }
                std::vector<long> hi(j);
                for (int i2 = 0; i2 < j; i2++) hi[i2] = std::min(diag[i2], diag[j]) / 2;
                std::vector<long> v(j);
                for (int i2 = 0; i2 < j; i2++) v[i2] = -hi[i2];
                while (true) {
                    for (int i2 = 0; i2 < j; i2++) { a(i2, j) = v[i2]; a(j, i2) = v[i2]; }
                    imat lead(j + 1, j + 1);
                    for (int r = 0; r <= j; r++)
                        for (int c = 0; c <= j; c++) lead(r, c) = a(r, c);
                    Int mj = det(lead);
                    if (mj > 0) {
                        Int fischer = mj;
                        for (int k = j + 1; k < RANK; k++) fischer *= diag[k];
                        if (fischer >= target) col_rec(j + 1);
                    }
                    int pos = j - 1;
                    while (pos >= 0) {
                        if (++v[pos] <= hi[pos]) break;
                        v[pos] = -hi[pos];
                        pos--;
                    }
                    if (pos < 0) break;
                }
            };
            col_rec(1);
            return;
        }
        for (long d = lo; d <= db; d += 2) {
            diag[i] = d;
            Int rem = prod * d;
            Int maxrest = rem;
            for (int k = i + 1; k < RANK; k++) maxrest *= db;
            if (maxrest < target) continue;
            if (rem > prod_cutoff) break;  // nondecreasing: only grows
            diag_rec(i + 1, d, rem);
        }
    };
    diag_rec(0, 2, Int(1));
    if (found.empty()) throw search_exhausted("no gram matrix with det 2N in bounds");
    // dedup by isometry (reduce already applied; theta reject inside)
    std::vector<qlattice> reps;
    for (auto& l : found) {
        bool dup = false;
        for (auto& r : reps)
            if (is_isometric(r, l)) { dup = true; break; }
        if (!dup) reps.push_back(l);
    }
    // group by genus: neighbor-closure identity
    std::vector<qlattice> genera;
    std::vector<genus_data> closures;
    for (auto& l : reps) {
        bool matched = false;
        for (size_t gi = 0; gi < genera.size(); gi++) {
            bool local_ok = true;
            for (auto& [p, e] : factorize(2 * n))
                if (!same_jordan(jordan_symbol(genera[gi], p), jordan_symbol(l, p))) {
                    local_ok = false;
                    break;
                }
            if (!local_ok) continue;
            if (closures[gi].classes.empty()) closures[gi] = enumerate_genus(genera[gi]);
            if (detail::find_class(closures[gi], l.gram)) {
                matched = true;
                break;
            }
        }
        if (!matched) {
            genera.push_back(l);
            closures.push_back(genus_data{});
        }
    }
    return genera;
}

}  // namespace omf
