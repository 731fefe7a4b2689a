#pragma once

// Weight representations W_{a,b} of the rank-5 special orthogonal group
// and radical characters theta_d.  Supported weights: (0,0) trivial,
// (1,0) standard, (1,1) = Lambda^2(std), (2,0) = traceless Sym^2.
// Characters are products over p | d of the determinant of the action on
// the radical of the form mod p (odd p) resp. mod 4 (p = 2); the spinor
// norm gives an independent route to the same values, kept as a
// cross-check.

#include <memory>

#include "omf/genus.hpp"

namespace omf {

// ---- spinor norm ----

// Decompose g in SO(Q) into reflections (positive definiteness makes
// every step anisotropic) and return the squarefree positive integer
// representing prod Q(w_i) modulo squares.
inline Int spinor_norm(const imat& a0, const qmat& g) {
    qmat a = to_q(a0);
    qmat h = g;
    Rat theta(1);
    auto bil = [&](const qmat& x, int cx, const qmat& y, int cy) {
        Rat s = 0;
        for (int i = 0; i < RANK; i++)
            for (int j = 0; j < RANK; j++) s += x(i, cx) * a(i, j) * y(j, cy);
        return s;
    };
    for (int i = 0; i < RANK; i++) {
        // w = h e_i - e_i; if nonzero, reflect h e_i back onto e_i
        qmat w(RANK, 1);
        bool zero = true;
        for (int r = 0; r < RANK; r++) {
            w(r, 0) = h(r, i) - (r == i ? 1 : 0);
            if (w(r, 0) != 0) zero = false;
        }
        if (zero) continue;
        Rat qw = bil(w, 0, w, 0) / 2;
        if (qw == 0) throw error("Internal", "isotropic reflection vector in definite space");
        theta *= qw;
        // h <- sigma_w h
        for (int c = 0; c < RANK; c++) {
            Rat t = 0;
            for (int r = 0; r < RANK; r++)
                for (int s = 0; s < RANK; s++) t += h(r, c) * a(r, s) * w(s, 0);
            t /= qw;
            for (int r = 0; r < RANK; r++) h(r, c) -= t * w(r, 0);
        }
    }
    if (!(h == qmat::identity(RANK))) throw error("Internal", "reflection decomposition failed");
    // squarefree positive representative of theta mod squares
    Int rep = theta.get_num() * theta.get_den();
    if (rep < 0) rep = -rep;
    Int out = 1;
    for (auto& [p, e] : factorize(rep))
        if (e % 2) out *= p;
    return out;
}

inline int spinor_character(const Int& spinor, const Int& p) {
    int v = 0;
    Int s = spinor;
    while (s % p == 0) { s /= p; v++; }
    return v % 2 ? -1 : 1;
}

// ---- radical characters ----

namespace detail {

// RREF basis of ker(a0 mod p) together with its pivot columns
struct mod_p_radical {
    uint32_t p;
    std::vector<pvec> basis;
    std::vector<int> pivots;

    mod_p_radical(const imat& a0, uint32_t pp) : p(pp) {
        mod_p_form f(a0, pp);
        basis = f.bilinear_radical();
        // the kernel basis from bilinear_radical is in "free column" form;
        // re-echelonize to get unit pivots
        for (auto& v : basis) {
            for (int c = 0; c < RANK; c++)
                if (v[c]) {
                    uint64_t inv = mod_inv(v[c], p);
                    for (int j = 0; j < RANK; j++) v[j] = (uint32_t)(v[j] * inv % p);
                    break;
                }
        }
        std::sort(basis.begin(), basis.end());
        // record pivot column of each basis vector (they are independent)
        // after a gaussian pass
        std::vector<pvec> ech;
        for (auto v : basis) {
            for (size_t r = 0; r < ech.size(); r++) {
                int pc = pivots[r];
                if (v[pc]) {
                    uint64_t f2 = p - v[pc];
                    for (int j = 0; j < RANK; j++)
                        v[j] = (uint32_t)((v[j] + f2 * ech[r][j] % p) % p);
                }
            }
            int pc = -1;
            for (int c = 0; c < RANK; c++)
                if (v[c]) { pc = c; break; }
            if (pc < 0) continue;
            uint64_t inv = mod_inv(v[pc], p);
            for (int j = 0; j < RANK; j++) v[j] = (uint32_t)(v[j] * inv % p);
            ech.push_back(v);
            pivots.push_back(pc);
        }
        basis = ech;
    }
};

// reduce a rational matrix mod m (denominators must be coprime to m)
inline pmat reduce_mod_q(const qmat& g, uint32_t m) {
    pmat r(g.nr, g.nc, m);
    for (int i = 0; i < g.nr; i++)
        for (int j = 0; j < g.nc; j++) {
            const Rat& x = g(i, j);
            long num = mod_long(Int(x.get_num()), (long)m);
            Int den = x.get_den();
            if (mpz_gcd_ui(nullptr, den.get_mpz_t(), m) != 1)
                throw error("Internal", "denominator not invertible mod m");
            long d = mod_long(den, (long)m);
            // m need not be prime: invert via extended gcd
            Int g2, u, v;
            mpz_gcdext(g2.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), Int(d).get_mpz_t(),
                       Int((long)m).get_mpz_t());
            long dinv = mod_long(u, (long)m);
            r(i, j) = (uint64_t)(num * dinv % m);
        }
    return r;
}

}  // namespace detail

// det(g | R_p) for odd p | N: the determinant of the induced map on the
// radical of the form mod p, mapped to +-1.
inline int radical_character_value_cached(const detail::mod_p_radical& rad, const qmat& g) {
    uint32_t up = rad.p;
    long p = (long)up;
    pmat gm = detail::reduce_mod_q(g, up);
    size_t k = rad.basis.size();
    pmat coef(k, k, up);
    for (size_t j = 0; j < k; j++) {
        pvec img{};
        for (int r = 0; r < RANK; r++) {
            uint64_t s = 0;
            for (int c = 0; c < RANK; c++) s += gm(r, c) * rad.basis[j][c] % up;
            img[r] = (uint32_t)(s % up);
        }
        // coefficients read off at the pivot columns (RREF basis)
        pvec rem = img;
        for (size_t r = 0; r < k; r++) {
            uint32_t cr = rem[rad.pivots[r]];
            coef(r, j) = cr;
            if (cr) {
                uint64_t f = up - cr;
                for (int t = 0; t < RANK; t++)
                    rem[t] = (uint32_t)((rem[t] + f * rad.basis[r][t] % up) % up);
            }
        }
        if (rem != pvec{}) throw error("Internal", "g does not preserve the radical");
    }
    // determinant mod p of coef
    uint64_t det = 1;
    pmat m = coef;
    for (size_t c = 0; c < k; c++) {
        size_t piv = c;
        while (piv < k && !m(piv, c)) piv++;
        if (piv == k) { det = 0; break; }
        if (piv != c) {
            for (size_t j = 0; j < k; j++) std::swap(m(c, j), m(piv, j));
            det = up - det;
        }
        det = det * m(c, c) % up;
        uint64_t inv = mod_inv(m(c, c), up);
        for (size_t i = c + 1; i < k; i++) {
            if (!m(i, c)) continue;
            uint64_t f = up - m(i, c) * inv % up;
            for (size_t j = c; j < k; j++) m(i, j) = (m(i, j) + f * m(c, j)) % up;
        }
    }
    if (det == 1) return 1;
    if (det == up - 1) return -1;
    throw error("Internal", "radical determinant not +-1");
    (void)p;
}

inline int radical_character_value(const imat& a0, long p, const qmat& g) {
    detail::mod_p_radical rad(a0, (uint32_t)p);
    if (rad.basis.empty()) throw radical_trivial("radical is zero mod " + std::to_string(p));
    return radical_character_value_cached(rad, g);
}

// R_2 = rad(L x Z/4): generator data from the Smith form
namespace detail {

struct mod4_radical {
    std::vector<std::array<long, RANK>> gens;  // generator vectors mod 4
    std::vector<long> orders;                  // gcd(s_i, 4) per generator
    std::vector<long> scales;                  // 4 / order
    std::vector<int> snf_index;                // position in the smith basis
    imat vinv;
    snf_result s;

    explicit mod4_radical(const imat& a0) : s(snf(a0)) {
        qmat vq = inverse(to_q(s.v));
        if (!is_integral(vq)) throw error("Internal", "smith transform not unimodular");
        vinv = to_int(vq);
        for (int i = 0; i < RANK; i++) {
            Int gi = gcd(Int(s.s(i, i)), Int(4));
            if (gi == 1) continue;
            long scale = Int(4 / gi).get_si();
            std::array<long, RANK> x{};
            for (int r = 0; r < RANK; r++) x[r] = mod_long(s.v(r, i) * scale, 4);
            gens.push_back(x);
            orders.push_back(gi.get_si());
            scales.push_back(scale);
            snf_index.push_back(i);
        }
    }
};

}  // namespace detail

// det(g | R_2): coefficient determinant mod 4 mapped to +-1.
inline int radical_character_value_2_cached(const detail::mod4_radical& rad, const qmat& g) {
    pmat gm = detail::reduce_mod_q(g, 4);
    size_t k = rad.gens.size();
    imat coef((int)k, (int)k);
    for (size_t j = 0; j < k; j++) {
        std::array<long, RANK> img{};
        for (int r = 0; r < RANK; r++) {
            long acc = 0;
            for (int c = 0; c < RANK; c++) acc += (long)gm(r, c) * rad.gens[j][c];
            img[r] = acc % 4;
        }
        std::array<long, RANK> y{};
        for (int r = 0; r < RANK; r++) {
            Int acc = 0;
            for (int c = 0; c < RANK; c++) acc += rad.vinv(r, c) * img[c];
            y[r] = mod_long(acc, 4);
        }
        // coefficients against the generators; all other smith coordinates
        // must vanish mod 4
        std::vector<bool> used(RANK, false);
        for (size_t t = 0; t < k; t++) used[rad.snf_index[t]] = true;
        for (int i = 0; i < RANK; i++)
            if (!used[i] && y[i] % 4 != 0)
                throw error("Internal", "g does not preserve rad mod 4");
        for (size_t t = 0; t < k; t++) {
            long yi = y[rad.snf_index[t]];
            if (yi % rad.scales[t] != 0) throw error("Internal", "g does not preserve rad mod 4");
            coef((int)t, (int)j) = (yi / rad.scales[t]) % 4;
        }
    }
    long d = mod_long(det(coef), 4);
    if (d == 1) return 1;
    if (d == 3) return -1;
    throw error("Internal", "radical determinant mod 4 not a unit");
}

inline int radical_character_value_2(const imat& a0, const qmat& g) {
    detail::mod4_radical rad(a0);
    if (rad.gens.empty()) throw radical_trivial("radical mod 4 is zero");
    return radical_character_value_2_cached(rad, g);
}

// theta_d for a squarefree divisor d of N, evaluated on isometries of the
// ambient space that preserve the localizations at p | d.
struct radical_character {
    Int d = 1;
    std::vector<detail::mod_p_radical> odd_rads;
    std::shared_ptr<detail::mod4_radical> rad2;

    radical_character() = default;
    radical_character(const imat& a0, const Int& dd) : d(dd) {
        for (auto& [p, e] : factorize(dd)) {
            if (e != 1) throw error("BadCharacter", "d must be squarefree");
            if (p == 2) {
                rad2 = std::make_shared<detail::mod4_radical>(a0);
                if (rad2->gens.empty()) throw radical_trivial("radical mod 4 is zero");
            } else {
                odd_rads.emplace_back(a0, (uint32_t)p.get_si());
                if (odd_rads.back().basis.empty())
                    throw radical_trivial("radical mod " + p.get_str() + " is zero");
            }
        }
    }

    bool trivial() const { return d == 1; }

    int value(const qmat& g) const {
        int v = 1;
        for (auto& rad : odd_rads) v *= radical_character_value_cached(rad, g);
        if (rad2) v *= radical_character_value_2_cached(*rad2, g);
        return v;
    }
};

// ---- weight representations ----

struct weight_rep {
    int a = 0, b = 0;
    int dim = 1;
    imat ambient;         // model depends on the ambient form for (2,0)
    qmat sym_basis;       // 15 x 14 coordinate basis of traceless Sym^2
    std::vector<int> sym_pivots;

    bool trivial() const { return a == 0 && b == 0; }

    qmat operator()(const qmat& g) const {
        if (a == 0 && b == 0) return qmat::identity(1);
        if (a == 1 && b == 0) return g;
        if (a == 1 && b == 1) {
            // Lambda^2 on e_i ^ e_j, i < j, lexicographic
            qmat r(10, 10);
            int row = 0;
            for (int i = 0; i < RANK; i++)
                for (int j = i + 1; j < RANK; j++) {
                    int col = 0;
                    for (int k = 0; k < RANK; k++)
                        for (int l = k + 1; l < RANK; l++) {
                            r(row, col) = g(i, k) * g(j, l) - g(i, l) * g(j, k);
                            col++;
                        }
                    row++;
                }
            return r;
        }
        // (2,0): S -> g S g^T restricted to {S : tr(a0 S) = 0}
        qmat r(14, 14);
        for (int col = 0; col < 14; col++) {
            // unpack column to a symmetric matrix
            qmat sm(RANK, RANK);
            int t = 0;
            for (int i = 0; i < RANK; i++)
                for (int j = i; j < RANK; j++) {
                    sm(i, j) = sym_basis(t, col);
                    sm(j, i) = sym_basis(t, col);
                    t++;
                }
            qmat img = g * sm * g.transpose();
            // coordinates of img against the echelon basis
            std::vector<Rat> y(15);
            t = 0;
            for (int i = 0; i < RANK; i++)
                for (int j = i; j < RANK; j++) y[t++] = img(i, j);
            for (int bi = 0; bi < 14; bi++) {
                Rat c = y[sym_pivots[bi]];
                r(bi, col) = c;
                if (c != 0)
                    for (int row = 0; row < 15; row++) y[row] -= c * sym_basis(row, bi);
            }
            for (int row = 0; row < 15; row++)
                if (y[row] != 0) throw error("Internal", "Sym2_0 not preserved");
        }
        return r;
    }
};

inline weight_rep make_weight_rep(int a, int b, const imat& ambient) {
    weight_rep w;
    w.a = a;
    w.b = b;
    w.ambient = ambient;
    if (a == 0 && b == 0) {
        w.dim = 1;
    } else if (a == 1 && b == 0) {
        w.dim = RANK;
    } else if (a == 1 && b == 1) {
        w.dim = 10;
    } else if (a == 2 && b == 0) {
        w.dim = 14;
        // coordinates: symmetric S as the 15-vector (S_ij)_{i<=j};
        // constraint tr(a0 S) = sum_i a0_ii S_ii + 2 sum_{i<j} a0_ij S_ij = 0
        qmat cons(1, 15);
        int t = 0;
        for (int i = 0; i < RANK; i++)
            for (int j = i; j < RANK; j++) {
                cons(0, t) = Rat(ambient(i, j)) * (i == j ? 1 : 2);
                t++;
            }
        qmat k = kernel(cons);  // 15 x 14
        // echelonize columns for stable coordinate extraction
        qmat kt = k.transpose();
        rref(kt);
        w.sym_basis = kt.transpose();
        w.sym_pivots.clear();
        for (int c = 0; c < 14; c++) {
            for (int row = 0; row < 15; row++)
                if (w.sym_basis(row, c) != 0) {
                    w.sym_pivots.push_back(row);
                    break;
                }
        }
    } else {
        throw unsupported_weight("supported: (0,0), (1,0), (1,1), (2,0)");
    }
    return w;
}

// map (k, j) to the weight label, following a = k+j-3, b = k-3
inline std::pair<int, int> weight_label_from_kj(int k, int j) {
    if (k < 3 || j < 0 || j % 2) throw unsupported_weight("need k >= 3 and even j >= 0");
    return {k + j - 3, k - 3};
}

// ---- invariant subspaces ----

// columns of the returned matrix form a basis of
//   { w : rho(g) w = chi(g) w for all g in SO(lat_i) }
// computed by the averaging projector over the ambient conjugates.
inline qmat invariant_basis(const genus_data& g, int idx, const weight_rep& w,
                            const radical_character& chi) {
    const genus_class& cls = g.classes[idx];
    qmat proj(w.dim, w.dim);
    long so = 0;
    for (auto& m : cls.aut.elements) {
        if (det(m) != 1) continue;
        so++;
        qmat amb = cls.conjugator * to_q(m) * cls.conjugator_inv;
        Rat c(chi.trivial() ? 1 : chi.value(amb));
        if (w.trivial()) {
            proj(0, 0) += c;
        } else {
            qmat rg = w(amb);
            for (int i = 0; i < w.dim; i++)
                for (int j = 0; j < w.dim; j++) proj(i, j) += c * rg(i, j);
        }
    }
    for (auto& x : proj.a) x /= so;
    // column space of the projector
    qmat pt = proj.transpose();
    auto pivots = rref(pt);
    qmat basis(w.dim, (int)pivots.size());
    for (int r = 0; r < (int)pivots.size(); r++)
        for (int c = 0; c < w.dim; c++) basis(c, r) = pt(r, c);
    return basis;
}

// independent multiplicity oracle: (1/|G|) sum chi(g) tr rho(g)
inline Rat invariant_dim_by_characters(const genus_data& g, int idx, const weight_rep& w,
                                       const radical_character& chi) {
    const genus_class& cls = g.classes[idx];
    Rat acc = 0;
    long so = 0;
    for (auto& m : cls.aut.elements) {
        if (det(m) != 1) continue;
        so++;
        qmat amb = cls.conjugator * to_q(m) * cls.conjugator_inv;
        Rat c(chi.trivial() ? 1 : chi.value(amb));
        if (w.trivial()) {
            acc += c;
        } else {
            qmat rg = w(amb);
            Rat tr = 0;
            for (int i = 0; i < w.dim; i++) tr += rg(i, i);
            acc += c * tr;
        }
    }
    return acc / so;
}

}  // namespace omf
