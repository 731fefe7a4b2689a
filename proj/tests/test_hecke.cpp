#include <catch2/catch_amalgamated.hpp>

#include "omf/hecke.hpp"

using namespace omf;

namespace {

const genus_data& genus312() {
    static genus_data g =
        enumerate_genus(read_gram_file(std::string(OMF_SOURCE_DIR) + "/fixtures/lattices/312.gram"));
    return g;
}

const space_context& space312_triv() {
    static space_context s = make_space(genus312(), 0, 0, Int(1));
    return s;
}

std::vector<Rat> column_sums(const qmat& m) {
    std::vector<Rat> s(m.nc);
    for (int j = 0; j < m.nc; j++)
        for (int i = 0; i < m.nr; i++) s[j] += m(i, j);
    return s;
}

}  // namespace

TEST_CASE("T_{p,1} trivial data: integer entries, column sums p^3+p^2+p+1") {
    for (long p : {5L, 7L}) {
        auto t = hecke_matrix(space312_triv(), p, 1);
        REQUIRE(t.mat.nr == 15);
        for (auto& x : t.mat.a) {
            REQUIRE(x.get_den() == 1);
            REQUIRE(x >= 0);
        }
        Rat want(p * p * p + p * p + p + 1);
        for (auto& cs : column_sums(t.mat)) REQUIRE(cs == want);
    }
}

TEST_CASE("T_{p,2} trivial data: column sums equal p(p+1)(p^2+1)") {
    auto t = hecke_matrix(space312_triv(), 5, 2);
    Rat want(Int(5) * (5 + 1) * (5 * 5 + 1));
    for (auto& cs : column_sums(t.mat)) REQUIRE(cs == want);
    for (auto& x : t.mat.a) {
        REQUIRE(x.get_den() == 1);
        REQUIRE(x >= 0);
    }
}

TEST_CASE("p^2-neighbors: p distinct lattices over each plane, all distinct") {
    imat g(RANK, RANK);
    for (int i = 0; i < RANK; i++) g(i, i) = 2;
    qlattice l(g);
    std::set<std::vector<Rat>> lattices;
    auto planes = isotropic_planes(l, 3);
    for (auto& pl : planes) {
        for (long variant = 0; variant < 3; variant++) {
            auto nb = p2_neighbor(l, pl, 3, variant);
            // canonical key: HNF of 3 * basis
            imat scaled = to_int(nb.basis * Rat(3));
            imat h = hnf(scaled.transpose());
            std::vector<Rat> key;
            for (auto& x : h.a) key.push_back(Rat(x));
            lattices.insert(key);
        }
    }
    REQUIRE(lattices.size() == 3 * planes.size());
}

TEST_CASE("mass symmetry: M * diag(1/#SO) is symmetric in trivial data") {
    auto& g = genus312();
    for (long p : {5L}) {
        auto t = hecke_matrix(space312_triv(), p, 1);
        qmat md = t.mat;
        for (int j = 0; j < md.nc; j++) {
            Rat w = make_rat(Int(1), Int(g.classes[j].so_order()));
            for (int i = 0; i < md.nr; i++) md(i, j) *= w;
        }
        REQUIRE(md == md.transpose());
    }
}

TEST_CASE("1/#SO vector is a right eigenvector with the degree eigenvalue") {
    auto& g = genus312();
    auto t = hecke_matrix(space312_triv(), 5, 1);
    std::vector<Rat> v(g.size());
    for (size_t i = 0; i < g.size(); i++) v[i] = make_rat(Int(1), Int(g.classes[i].so_order()));
    Rat deg(5 * 5 * 5 + 5 * 5 + 5 + 1);
    for (int i = 0; i < t.mat.nr; i++) {
        Rat acc = 0;
        for (int j = 0; j < t.mat.nc; j++) acc += t.mat(i, j) * v[j];
        REQUIRE(acc == deg * v[i]);
    }
}

TEST_CASE("Hecke operators commute (good primes, both indices)") {
    std::vector<hecke_matrix_t> ops;
    ops.push_back(hecke_matrix(space312_triv(), 5, 1));
    ops.push_back(hecke_matrix(space312_triv(), 7, 1));
    ops.push_back(hecke_matrix(space312_triv(), 5, 2));
    for (size_t i = 0; i < ops.size(); i++)
        for (size_t j = i + 1; j < ops.size(); j++)
            REQUIRE(ops[i].mat * ops[j].mat == ops[j].mat * ops[i].mat);
}

TEST_CASE("character-twisted operators commute and stay rational") {
    auto s6 = make_space(genus312(), 0, 0, Int(6));
    auto a = hecke_matrix(s6, 5, 1);
    auto b = hecke_matrix(s6, 7, 1);
    REQUIRE(a.mat.nr == 12);
    REQUIRE(a.mat * b.mat == b.mat * a.mat);
}

TEST_CASE("orbit pruning is a pure optimization") {
    auto s6 = make_space(genus312(), 0, 0, Int(6));
    hecke_options pruned;
    hecke_options naive;
    naive.orbit_pruning = false;
    naive.use_fingerprint = false;
    REQUIRE(hecke_matrix(s6, 5, 1, pruned).mat == hecke_matrix(s6, 5, 1, naive).mat);
    REQUIRE(hecke_matrix(space312_triv(), 5, 2, pruned).mat ==
            hecke_matrix(space312_triv(), 5, 2, naive).mat);
}

TEST_CASE("pruning matches on a nontrivial weight") {
    auto s = make_space(genus312(), 1, 1, Int(1));
    hecke_options pruned;
    hecke_options naive;
    naive.orbit_pruning = false;
    auto m1 = hecke_matrix(s, 5, 1, pruned);
    auto m2 = hecke_matrix(s, 5, 1, naive);
    REQUIRE(m1.mat == m2.mat);
}

TEST_CASE("schedule independence: 1 worker vs 4 workers, bit identical") {
    auto s6 = make_space(genus312(), 0, 0, Int(6));
    hecke_options one;
    one.workers = 1;
    hecke_options four;
    four.workers = 4;
    REQUIRE(hecke_matrix(s6, 5, 1, one).mat == hecke_matrix(s6, 5, 1, four).mat);
}

TEST_CASE("bad-prime operator: neighbors classify and commute with good ops") {
    // 3 || 312 (split quotient) and 13 || 312 (nonsplit quotient)
    auto t3 = hecke_matrix_bad(space312_triv(), 3);
    Rat want3(3 * (3 + 1) * (3 + 1));
    for (auto& cs : column_sums(t3.mat)) REQUIRE(cs == want3);
    auto t5 = hecke_matrix(space312_triv(), 5, 1);
    REQUIRE(t3.mat * t5.mat == t5.mat * t3.mat);

    auto t13 = hecke_matrix_bad(space312_triv(), 13);
    Rat want13(13 * (13 * 13 + 1));
    for (auto& cs : column_sums(t13.mat)) REQUIRE(cs == want13);
    REQUIRE(t13.mat * t5.mat == t5.mat * t13.mat);

    REQUIRE_THROWS_AS(hecke_matrix_bad(space312_triv(), 2), error);  // 4 | 312
    REQUIRE_THROWS_AS(hecke_matrix_bad(space312_triv(), 5), error);  // 5 good
}
