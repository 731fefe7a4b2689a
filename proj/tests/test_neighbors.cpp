#include <catch2/catch_amalgamated.hpp>

#include "omf/genus.hpp"

using namespace omf;

namespace {

qlattice fixture_312() {
    return read_gram_file(std::string(OMF_SOURCE_DIR) + "/fixtures/lattices/312.gram");
}

qlattice scaled_identity(int s) {
    imat g(RANK, RANK);
    for (int i = 0; i < RANK; i++) g(i, i) = s;
    return qlattice(g);
}

// brute force over all of P^4(F_p)
std::vector<pvec> brute_isotropic_points(const qlattice& l, long p) {
    detail::mod_p_form f(l.gram, (uint32_t)p);
    std::vector<pvec> pts;
    std::function<void(int, pvec)> rec = [&](int lead, pvec x) {
        x[lead] = 1;
        std::vector<uint32_t> rest(RANK - 1 - lead, 0);
        while (true) {
            pvec y = x;
            for (int i = 0; i < (int)rest.size(); i++) y[lead + 1 + i] = rest[i];
            if (f.q(y) == 0) pts.push_back(y);
            int pos = (int)rest.size() - 1;
            while (pos >= 0) {
                if (++rest[pos] < (uint32_t)p) break;
                rest[pos] = 0;
                pos--;
            }
            if (pos < 0) break;
        }
        if (lead + 1 < RANK) rec(lead + 1, pvec{});
    };
    rec(0, pvec{});
    std::sort(pts.begin(), pts.end());
    return pts;
}

// brute force over all pairs of isotropic points
std::set<plane> brute_isotropic_planes(const qlattice& l, long p) {
    detail::mod_p_form f(l.gram, (uint32_t)p);
    auto pts = brute_isotropic_points(l, p);
    std::set<plane> planes;
    for (size_t i = 0; i < pts.size(); i++)
        for (size_t j = i + 1; j < pts.size(); j++) {
            if (f.t(pts[i], pts[j]) != 0) continue;
            // every point of the plane must be isotropic (relevant at p=2
            // where T alone does not control Q on combinations)
            plane pl = detail::plane_canonical(pts[i], pts[j], (uint32_t)p);
            bool all_iso = true;
            for (auto& pt : detail::plane_points(pl, (uint32_t)p))
                if (f.q(pt) != 0) { all_iso = false; break; }
            if (all_iso) planes.insert(pl);
        }
    return planes;
}

}  // namespace

TEST_CASE("isotropic point counts match brute force") {
    qlattice l312 = fixture_312();
    for (long p : {5L, 7L, 11L}) {
        auto fast = isotropic_points(l312, p);
        auto brute = brute_isotropic_points(l312, p);
        REQUIRE(fast == brute);
        REQUIRE((long)fast.size() == p * p * p + p * p + p + 1);
    }
    qlattice i2 = scaled_identity(2);  // N = 16, odd primes good
    for (long p : {3L, 5L, 7L}) {
        auto fast = isotropic_points(i2, p);
        REQUIRE(fast == brute_isotropic_points(i2, p));
        REQUIRE((long)fast.size() == p * p * p + p * p + p + 1);
    }
}

TEST_CASE("isotropic points mod 2 for odd N") {
    // diag(2,2,2,2,2x) has N = 16x; pick an odd-N fixture instead:
    // A2 + A3 has det 12, N = 6
    imat g(RANK, RANK);
    g(0, 0) = 2; g(0, 1) = 1; g(1, 0) = 1; g(1, 1) = 2;
    g(2, 2) = 2; g(2, 3) = 1; g(3, 2) = 1; g(3, 3) = 2; g(3, 4) = 1; g(4, 3) = 1; g(4, 4) = 2;
    qlattice l(g);
    REQUIRE(half_discriminant(l) == 6);  // good primes: 5, 7, ...
    for (long p : {5L, 7L}) {
        auto fast = isotropic_points(l, p);
        REQUIRE(fast == brute_isotropic_points(l, p));
    }
    // p = 2 divides 2N here; the quadratic-form count still exists for
    // lattices with odd N, e.g. half-discriminant 61 once available.
    REQUIRE_THROWS_AS(isotropic_points(l, 2), error);
}

TEST_CASE("isotropic plane counts match brute force") {
    qlattice i2 = scaled_identity(2);
    for (long p : {3L, 5L}) {
        auto fast = isotropic_planes(i2, p);
        auto brute = brute_isotropic_planes(i2, p);
        REQUIRE(std::set<plane>(fast.begin(), fast.end()) == brute);
        REQUIRE((long)fast.size() == (p + 1) * (p * p + 1));
    }
    auto planes312 = isotropic_planes(fixture_312(), 5);
    REQUIRE((long)planes312.size() == 156);
    REQUIRE(std::set<plane>(planes312.begin(), planes312.end()) ==
            brute_isotropic_planes(fixture_312(), 5));
}

TEST_CASE("p-neighbor preserves half-discriminant, exhaustively at p=3") {
    qlattice l = scaled_identity(2);
    for (auto& x : isotropic_points(l, 3)) {
        auto nb = p_neighbor(l, x, 3);
        REQUIRE(det(nb.gram) == det(l.gram));
        qlattice nl(nb.gram);
        REQUIRE(half_discriminant(nl) == 16);
    }
}

TEST_CASE("neighbor symmetry: the source is a neighbor of its neighbor") {
    qlattice l = scaled_identity(2);
    auto pts = isotropic_points(l, 3);
    auto nb = p_neighbor(l, pts[0], 3);
    qlattice l2(nb.gram);
    bool back = false;
    for (auto& y : isotropic_points(l2, 3)) {
        auto nb2 = p_neighbor(l2, y, 3);
        if (is_isometric(qlattice(nb2.gram), l)) { back = true; break; }
    }
    REQUIRE(back);
}

TEST_CASE("aut-equivalent points give isometric neighbors") {
    qlattice l = fixture_312();
    auto aut = automorphism_group(l);
    mod_p_group action(aut, 5);
    auto pts = isotropic_points(l, 5);
    pvec x = pts[0];
    pvec gx = action.apply(action.mats[1], x);
    auto n1 = p_neighbor(l, x, 5);
    auto n2 = p_neighbor(l, gx, 5);
    REQUIRE(is_isometric(qlattice(n1.gram), qlattice(n2.gram)).has_value());
}

TEST_CASE("p2-neighbor postconditions at p=3, all planes") {
    qlattice l = scaled_identity(2);
    for (auto& pl : isotropic_planes(l, 3)) {
        auto nb = p2_neighbor(l, pl, 3);
        REQUIRE(det(nb.gram) == det(l.gram));
    }
}

TEST_CASE("genus of 2*I5 is a single class") {
    auto g = enumerate_genus(scaled_identity(2), 3);
    REQUIRE(g.size() == 1);
}

TEST_CASE("N=312 genus has 15 classes") {
    auto g = enumerate_genus(fixture_312());
    REQUIRE(g.seed_prime == 5);
    REQUIRE(g.size() == 15);
    // classes pairwise non-isometric
    for (size_t i = 0; i < g.size(); i++)
        for (size_t j = i + 1; j < g.size(); j++)
            REQUIRE(!is_isometric(g.classes[i].lat, g.classes[j].lat).has_value());
    // conjugators express every class inside the ambient space
    for (auto& c : g.classes) {
        qmat gg = c.conjugator.transpose() * to_q(g.ambient_gram()) * c.conjugator;
        REQUIRE(gg == to_q(c.lat.gram));
    }
}

TEST_CASE("class count independent of the seed prime") {
    auto g5 = enumerate_genus(fixture_312(), 5);
    auto g7 = enumerate_genus(fixture_312(), 7);
    REQUIRE(g5.size() == g7.size());
}

TEST_CASE("classify: representatives and neighbors") {
    auto g = enumerate_genus(fixture_312());
    // each representative classifies to itself
    for (int i = 0; i < (int)g.size(); i++) {
        auto r = classify(g, g.classes[i].conjugator, g.classes[i].lat.gram);
        REQUIRE(r.index == i);
    }
    // all 156 neighbors of representative 0 classify, with valid witnesses
    qlattice rep0 = g.classes[0].lat;
    qmat a0 = to_q(g.ambient_gram());
    for (auto& x : isotropic_points(rep0, 5)) {
        auto nb = p_neighbor(rep0, x, 5);
        qmat basis = g.classes[0].conjugator * nb.basis;
        auto r = classify(g, basis, nb.gram);
        REQUIRE(r.index >= 0);
        REQUIRE(r.index < (int)g.size());
        // witness is a proper isometry of the ambient space
        REQUIRE(r.witness.transpose() * a0 * r.witness == a0);
        REQUIRE(det(r.witness) == 1);
        // witness carries the neighbor onto the representative lattice
        qmat s = g.classes[r.index].conjugator_inv * r.witness * basis;
        REQUIRE(is_integral(s));
        Int ds = det(to_int(s));
        REQUIRE((ds == 1 || ds == -1));
    }
    // a different-determinant lattice is rejected
    REQUIRE_THROWS_AS(classify(g, qmat::identity(RANK), scaled_identity(2).gram), error);
}

TEST_CASE("orbit partition: sum of minimal-orbit sizes is the point count") {
    qlattice l = fixture_312();
    auto aut = automorphism_group(l);
    mod_p_group action(aut, 5);
    auto pts = isotropic_points(l, 5);
    long total = 0;
    for (auto& x : pts) {
        auto [minimal, osize] = orbit_is_minimal(x, action);
        if (minimal) {
            total += osize;
            REQUIRE(aut.order() % osize == 0);
        }
    }
    REQUIRE(total == (long)pts.size());
}

TEST_CASE("bad isotropic point counts see the quotient type") {
    qlattice l = fixture_312();  // 312 = 2^3 * 3 * 13
    // 13 || 312 with nonsplit quotient: 13 * (13^2 + 1) points
    REQUIRE(quotient_is_nonsplit(l, 13));
    REQUIRE((long)bad_isotropic_points(l, 13).size() == 13 * 170);
    // 3 || 312 with split quotient: 3 * (3+1)^2 points
    REQUIRE(!quotient_is_nonsplit(l, 3));
    REQUIRE((long)bad_isotropic_points(l, 3).size() == 3 * 16);
}

TEST_CASE("genus search handles degenerate input") {
    // N=6: the A2+A3 lattice has det 12; search must return gracefully
    auto genera = genus_search(Int(6), 3);
    REQUIRE(!genera.empty());
    for (auto& l : genera) REQUIRE(half_discriminant(l) == 6);
}
