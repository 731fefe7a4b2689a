#pragma once

// Kneser p-neighbors.  Isotropic points are enumerated in O(p^3) by
// solving a quadratic for the last coordinate; totally isotropic planes
// come from extending each point through the conic in x-perp/x.  The
// neighbor lattice is assembled exactly over Q with denominator p and
// verified by determinant and elementary-divisor postconditions.
//
// A prime is good when p does not divide N; p = 2 is handled through the
// quadratic form (isotropy means Q(x) even), which is what the mod-2
// counting needs.

#include "omf/isometry.hpp"

namespace omf {

namespace detail {

struct sqrt_table {
    uint32_t p;
    std::vector<int32_t> s;  // s[a] = some square root of a, or -1

    explicit sqrt_table(uint32_t pp) : p(pp), s(pp, -1) {
        for (uint32_t t = 0; t <= pp / 2; t++) {
            uint64_t sq = (uint64_t)t * t % pp;
            if (s[sq] < 0) s[sq] = (int32_t)t;
        }
    }
};

// Q, T mod p of an integer Gram matrix
struct mod_p_form {
    uint32_t p;
    std::array<uint32_t, RANK * RANK> a;   // bilinear gram mod p
    std::array<uint32_t, RANK> half_diag;  // Q(e_i) = a_ii/2 mod p

    mod_p_form(const imat& gram, uint32_t pp) : p(pp) {
        for (int i = 0; i < RANK; i++)
            for (int j = 0; j < RANK; j++) a[i * RANK + j] = (uint32_t)mod_long(gram(i, j), (long)pp);
        for (int i = 0; i < RANK; i++) half_diag[i] = (uint32_t)mod_long(gram(i, i) / 2, (long)pp);
    }

    uint32_t q(const pvec& x) const {
        uint64_t s = 0;
        for (int i = 0; i < RANK; i++) {
            if (!x[i]) continue;
            s += (uint64_t)half_diag[i] * x[i] % p * x[i];
            for (int j = i + 1; j < RANK; j++) s += (uint64_t)a[i * RANK + j] * x[i] % p * x[j];
        }
        return (uint32_t)(s % p);
    }

    uint32_t t(const pvec& x, const pvec& y) const {
        uint64_t s = 0;
        for (int i = 0; i < RANK; i++) {
            if (!x[i]) continue;
            uint64_t row = 0;
            for (int j = 0; j < RANK; j++) row += (uint64_t)a[i * RANK + j] * y[j] % p;
            s += x[i] * (row % p) % p;
        }
        return (uint32_t)(s % p);
    }

    pvec gram_times(const pvec& x) const {
        pvec w{};
        for (int i = 0; i < RANK; i++) {
            uint64_t s = 0;
            for (int j = 0; j < RANK; j++) s += (uint64_t)a[i * RANK + j] * x[j] % p;
            w[i] = (uint32_t)(s % p);
        }
        return w;
    }

    // radical of the bilinear form mod p
    std::vector<pvec> bilinear_radical() const {
        qmat m(RANK, RANK);
        for (int i = 0; i < RANK; i++)
            for (int j = 0; j < RANK; j++) m(i, j) = Rat((long)a[i * RANK + j]);
        // kernel over F_p: do it with integer RREF mod p
        pmat w(RANK, RANK, p);
        for (int i = 0; i < RANK; i++)
            for (int j = 0; j < RANK; j++) w(i, j) = a[i * RANK + j];
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < RANK && r < RANK; c++) {
            int piv = -1;
            for (int i = r; i < RANK; i++)
                if (w(i, c)) { piv = i; break; }
            if (piv < 0) continue;
            for (int j = 0; j < RANK; j++) std::swap(w(r, j), w(piv, j));
            uint64_t inv = mod_inv(w(r, c), p);
            for (int j = 0; j < RANK; j++) w(r, j) = w(r, j) * inv % p;
            for (int i = 0; i < RANK; i++) {
                if (i == r || !w(i, c)) continue;
                uint64_t f = p - w(i, c);
                for (int j = 0; j < RANK; j++) w(i, j) = (w(i, j) + f * w(r, j)) % p;
            }
            pivots.push_back(c);
            r++;
        }
        std::vector<bool> is_piv(RANK, false);
        for (int c : pivots) is_piv[c] = true;
        std::vector<pvec> basis;
        for (int c = 0; c < RANK; c++) {
            if (is_piv[c]) continue;
            pvec v{};
            v[c] = 1;
            for (size_t pi = 0; pi < pivots.size(); pi++)
                v[pivots[pi]] = (uint32_t)((p - w((int)pi, c)) % p);
            basis.push_back(v);
        }
        return basis;
    }
};

}  // namespace detail

// All projective points [x] of P^4(F_p) with Q(x) = 0, in canonical form
// (first nonzero coordinate 1), sorted lexicographically.  For good p the
// quadric is smooth and the count is p^3 + p^2 + p + 1 (asserted).
inline std::vector<pvec> isotropic_points(const qlattice& l, long p, bool check_good = true) {
    Int n = half_discriminant(l);
    if (check_good && n % p == 0)
        throw bad_prime("isotropic_points: p divides N; use the bad-prime path");
    uint32_t up = (uint32_t)p;
    detail::mod_p_form f(l.gram, up);
    std::vector<pvec> pts;
    if (p == 2) {
        for (uint32_t bits = 1; bits < 32; bits++) {
            pvec x{};
            for (int i = 0; i < RANK; i++) x[i] = (bits >> (RANK - 1 - i)) & 1;
            if (f.q(x) == 0) pts.push_back(x);
        }
        std::sort(pts.begin(), pts.end());
        if (check_good && (long)pts.size() != p * p * p + p * p + p + 1)
            throw error("Degenerate", "quadric not smooth mod 2");
        return pts;
    }
    detail::sqrt_table st(up);
    uint64_t inv2 = mod_inv(2, up);
    // lead position k, free coordinates k+1..3, solve for coordinate 4
    for (int k = 0; k < RANK; k++) {
        pvec x{};
        x[k] = 1;
        int nfree = RANK - 2 - k;  // coordinates k+1 .. 3
        std::vector<uint32_t> free_vals(std::max(nfree, 0), 0);
        auto emit_solutions = [&](pvec y) {
            // solve Q(y + t e4) = 0: a t^2 + b t + c
            uint32_t c = f.q(y);
            pvec e4{};
            e4[4] = 1;
            uint32_t b = f.t(y, e4);
            uint32_t a = f.half_diag[4];
            if (k == 4) {
                if (f.q(y) == 0) pts.push_back(y);
                return;
            }
            if (a != 0) {
                uint64_t disc = ((uint64_t)b * b % up + (uint64_t)(up - 4 % up) * a % up * c) % up;
                int32_t r = st.s[disc];
                if (r < 0) return;
                uint64_t inv2a = mod_inv(2 * a % up, up);
                uint64_t t1 = (up - b + r) % up * inv2a % up;
                y[4] = (uint32_t)t1;
                pts.push_back(y);
                if (r != 0) {
                    uint64_t t2 = (2ull * up - b - r) % up * inv2a % up;
                    y[4] = (uint32_t)t2;
                    pts.push_back(y);
                }
            } else if (b != 0) {
                y[4] = (uint32_t)((up - c) * mod_inv(b, up) % up);
                pts.push_back(y);
            } else if (c == 0) {
                for (uint32_t t = 0; t < up; t++) {
                    y[4] = t;
                    pts.push_back(y);
                }
            }
            (void)inv2;
        };
        if (k == 4) {
            emit_solutions(x);
            continue;
        }
        // iterate the free coordinates odometer-style
        while (true) {
            pvec y = x;
            for (int i = 0; i < nfree; i++) y[k + 1 + i] = free_vals[i];
            y[4] = 0;
            emit_solutions(y);
            int pos = nfree - 1;
            while (pos >= 0 && ++free_vals[pos] == up) free_vals[pos--] = 0;
            if (pos < 0) break;
        }
    }
    std::sort(pts.begin(), pts.end());
    if (check_good && (long)pts.size() != p * p * p + p * p + p + 1)
        throw error("Degenerate", "quadric not smooth mod p");
    return pts;
}

// isotropic points for p || N: Q(x) = 0 mod p and x outside the bilinear
// radical, i.e. the points lying over the nondegenerate quotient's quadric
inline std::vector<pvec> bad_isotropic_points(const qlattice& l, long p) {
    Int n = half_discriminant(l);
    if (n % p != 0 || n % (Int(p) * p) == 0)
        throw bad_prime("bad_isotropic_points requires p || N");
    uint32_t up = (uint32_t)p;
    detail::mod_p_form f(l.gram, up);
    std::vector<pvec> pts;
    // direct enumeration is fine here: bad primes stay small in practice
    std::function<void(int, pvec)> rec = [&](int k, pvec x) {
        if (k == RANK) return;
        x[k] = 1;
        std::vector<uint32_t> rest(RANK - 1 - k, 0);
        while (true) {
            pvec y = x;
            for (int i = 0; i < (int)rest.size(); i++) y[k + 1 + i] = rest[i];
            if (f.q(y) == 0 && f.gram_times(y) != pvec{}) pts.push_back(y);
            int pos = (int)rest.size() - 1;
            while (pos >= 0 && ++rest[pos] == up) rest[pos--] = 0;
            if (pos < 0) break;
        }
        pvec zero{};
        rec(k + 1, zero);
    };
    rec(0, pvec{});
    std::sort(pts.begin(), pts.end());
    return pts;
}

// canonical form of a 2-dim subspace: reduced row echelon basis
struct plane {
    pvec r1, r2;
    bool operator<(const plane& o) const { return std::tie(r1, r2) < std::tie(o.r1, o.r2); }
    bool operator==(const plane& o) const { return r1 == o.r1 && r2 == o.r2; }
};

namespace detail {

inline plane plane_canonical(pvec v, pvec w, uint32_t p) {
    std::array<pvec, 2> m = {v, w};
    int r = 0;
    for (int c = 0; c < RANK && r < 2; c++) {
        int piv = -1;
        for (int i = r; i < 2; i++)
            if (m[i][c]) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        uint64_t inv = mod_inv(m[r][c], p);
        for (int j = 0; j < RANK; j++) m[r][j] = (uint32_t)(m[r][j] * inv % p);
        for (int i = 0; i < 2; i++) {
            if (i == r || !m[i][c]) continue;
            uint64_t f = p - m[i][c];
            for (int j = 0; j < RANK; j++) m[i][j] = (uint32_t)((m[i][j] + f * m[r][j]) % p);
        }
        r++;
    }
    if (r < 2) throw error("Internal", "plane_canonical: vectors dependent");
    return {m[0], m[1]};
}

// the p+1 projective points on a plane, canonical forms
inline std::vector<pvec> plane_points(const plane& pl, uint32_t p) {
    std::vector<pvec> pts;
    pts.push_back(projective_canonical(pl.r2, p));
    for (uint32_t t = 0; t < p; t++) {
        pvec v;
        for (int i = 0; i < RANK; i++) v[i] = (uint32_t)((pl.r1[i] + (uint64_t)t * pl.r2[i]) % p);
        pts.push_back(projective_canonical(v, p));
    }
    return pts;
}

}  // namespace detail

// All totally isotropic 2-dim subspaces mod p in canonical (reduced row
// echelon) form, sorted; count (p+1)(p^2+1) for good p (asserted).
inline std::vector<plane> isotropic_planes(const qlattice& l, long p) {
    Int n = half_discriminant(l);
    if (n % p == 0) throw bad_prime("isotropic_planes: p divides N");
    uint32_t up = (uint32_t)p;
    detail::mod_p_form f(l.gram, up);
    auto pts = isotropic_points(l, p);
    std::set<plane> planes;
    for (auto& x : pts) {
        // y must satisfy T(x,y) = 0, Q(y) = 0, y independent of x;
        // enumerate points of the conic on (x-perp)/x
        pvec wx = f.gram_times(x);
        // basis of x-perp containing x; complete to 3 vectors spanning perp/x
        std::vector<pvec> perp;
        {
            int piv = -1;
            for (int i = 0; i < RANK; i++)
                if (wx[i]) { piv = i; break; }
            if (piv < 0) throw error("Degenerate", "point in radical at good p");
            uint64_t inv = mod_inv(wx[piv], up);
            for (int j = 0; j < RANK; j++) {
                if (j == piv) continue;
                pvec v{};
                v[j] = 1;
                v[piv] = (uint32_t)((up - (uint64_t)wx[j] * inv % up) % up);
                perp.push_back(v);
            }
        }
        // quotient basis: perp vectors modulo x; drop one to make dim 3.
        // find coordinate where x has its leading 1 to reduce against
        int xlead = 0;
        while (x[xlead] == 0) xlead++;
        std::vector<pvec> quo;
        for (auto& v : perp) {
            // v - v[xlead] * x  kills the x-component in a fixed chart
            pvec w;
            uint64_t c = v[xlead];
            for (int i = 0; i < RANK; i++) w[i] = (uint32_t)((v[i] + (up - 1) * c % up * x[i]) % up);
            if (w != pvec{}) quo.push_back(w);
        }
        // reduce quo to 3 independent vectors mod p
        {
            std::vector<pvec> basis;
            std::array<int, RANK> lead_of{};
            lead_of.fill(-1);
            for (auto v : quo) {
                for (int c = 0; c < RANK; c++) {
                    if (!v[c]) continue;
                    if (lead_of[c] >= 0) {
                        uint64_t f2 = (uint64_t)v[c] * mod_inv(basis[lead_of[c]][c], up) % up;
                        for (int j = 0; j < RANK; j++)
                            v[j] = (uint32_t)((v[j] + (up - f2) * basis[lead_of[c]][j]) % up);
                    } else {
                        lead_of[c] = (int)basis.size();
                        basis.push_back(v);
                        break;
                    }
                }
            }
            quo = basis;
        }
        if (quo.size() != 3) throw error("Internal", "x-perp/x should be 3-dimensional");
        // conic points: c0 a^2 + ... on coordinates (a,b,c) wrt quo basis
        auto lift = [&](uint32_t a, uint32_t b, uint32_t c) {
            pvec y{};
            for (int i = 0; i < RANK; i++)
                y[i] = (uint32_t)(((uint64_t)a * quo[0][i] + (uint64_t)b * quo[1][i] +
                                   (uint64_t)c * quo[2][i]) % up);
            return y;
        };
        std::vector<pvec> conic;
        // chart a=1: solve quadratic in c for each b; chart a=0,b=1: solve for c; point (0,0,1)
        for (uint32_t chart = 0; chart < 3; chart++) {
            if (chart == 0) {
                for (uint32_t b = 0; b < up; b++)
                    for (uint32_t c = 0; c < up; c++) {
                        pvec y = lift(1, b, c);
                        if (f.q(y) == 0) conic.push_back(y);
                    }
            } else if (chart == 1) {
                for (uint32_t c = 0; c < up; c++) {
                    pvec y = lift(0, 1, c);
                    if (f.q(y) == 0) conic.push_back(y);
                }
            } else {
                pvec y = lift(0, 0, 1);
                if (f.q(y) == 0) conic.push_back(y);
            }
        }
        for (auto& y : conic) {
            plane pl = detail::plane_canonical(x, y, up);
            // emit each plane exactly once: from its lex-min point
            auto pp = detail::plane_points(pl, up);
            if (*std::min_element(pp.begin(), pp.end()) == x) planes.insert(pl);
        }
    }
    std::vector<plane> out(planes.begin(), planes.end());
    if ((long)out.size() != (p + 1) * (p * p + 1))
        throw error("Degenerate", "unexpected isotropic plane count");
    return out;
}

// ---- neighbor constructions ----

struct neighbor_result {
    qmat basis;  // columns: basis of the neighbor in source-lattice coordinates
    imat gram;   // basis^T * gram * basis
};

namespace detail {

// HNF-based lattice from generators: columns of g (rational, denominator
// dividing p) generate a full-rank lattice; returns a 5-column basis
inline qmat lattice_from_generators(const qmat& gens, long p) {
    // rows of (p * gens)^T are integer generators
    qmat scaled = gens * Rat(p);
    if (!is_integral(scaled)) throw error("Internal", "generator denominators exceed p");
    imat rows = to_int(scaled).transpose();
    imat h = hnf(rows);
    if (h.nr != RANK) throw error("Internal", "generators do not span");
    qmat basis(RANK, RANK);
    for (int i = 0; i < RANK; i++)
        for (int j = 0; j < RANK; j++) basis(j, i) = make_rat(h(i, j), Int(p));
    return basis;
}

inline std::vector<Int> snf_pattern(const qmat& basis, long p) {
    imat scaled = to_int(basis * Rat(p));
    auto d = snf_diagonal(scaled);
    return d;
}

}  // namespace detail

// Kneser p-neighbor at an isotropic point x:
//   L' = { y in L : T(x,y) = 0 mod p } + Z (x'/p)
// with x' = x lifted so Q(x') = 0 mod p^2.
inline neighbor_result p_neighbor(const qlattice& l, const pvec& x, long p) {
    uint32_t up = (uint32_t)p;
    detail::mod_p_form f(l.gram, up);
    if (f.q(x) != 0) throw not_isotropic("p_neighbor: Q(x) != 0 mod p");
    pvec w = f.gram_times(x);
    int piv = -1;
    for (int i = 0; i < RANK; i++)
        if (w[i]) { piv = i; break; }
    if (piv < 0) throw not_isotropic("p_neighbor: x is in the radical mod p");
    // lift x so that Q(x') = 0 mod p^2: x' = x + p c e_piv with
    // T(x, e_piv) c = -Q(x)/p mod p
    vec5 xl;
    for (int i = 0; i < RANK; i++) xl[i] = x[i];
    Int qx = l.q(xl);
    Int qx_over_p = qx / p;
    uint32_t target = (uint32_t)mod_long(-qx_over_p, p);
    uint32_t c = (uint32_t)(target * mod_inv(w[piv], up) % up);
    vec5 xprime = xl;
    xprime[piv] += (int64_t)p * c;
    if (l.q(xprime) % (Int(p) * p) != 0) throw error("Internal", "lift failed");
    // generators: perp basis + x'/p
    qmat gens(RANK, RANK + 1);
    int gcol = 0;
    for (int j = 0; j < RANK; j++) {
        if (j == piv) continue;
        // e_j - (w_j / w_piv) e_piv
        uint32_t cf = (uint32_t)((uint64_t)w[j] * mod_inv(w[piv], up) % up);
        gens(j, gcol) = 1;
        gens(piv, gcol) = Rat((long)((up - cf) % up));
        gcol++;
    }
    gens(piv, gcol) = Rat(p);
    gcol++;
    for (int i = 0; i < RANK; i++) gens(i, gcol) = make_rat(xprime[i], p);
    qmat basis = detail::lattice_from_generators(gens, p);
    qmat gq = basis.transpose() * to_q(l.gram) * basis;
    if (!is_integral(gq)) throw error("Internal", "neighbor gram not integral");
    neighbor_result r{basis, to_int(gq)};
    if (det(r.gram) != det(l.gram)) throw error("Internal", "neighbor determinant changed");
    // elementary divisors of p * basis must be (1, p, p, p, p^2):
    // index p in both directions
    auto dd = detail::snf_pattern(basis, p);
    std::vector<Int> want = {Int(1), Int(p), Int(p), Int(p), Int(p) * p};
    if (dd != want) throw error("Internal", "neighbor index pattern wrong");
    return r;
}

// p^2-neighbor at a totally isotropic plane.  Both basis vectors are
// lifted to Q = 0 mod p^2 with pairing 0 mod p^2, and
// L' = perp(P) + (x'/p, y'/p).  The lift is not unique: the p inequivalent
// choices are parametrized by variant in 0..p-1 (shifting the lifts by
// p-multiples of dual vectors), and together they are the p distinct
// p^2-neighbors lying over the plane.
inline neighbor_result p2_neighbor(const qlattice& l, const plane& pl, long p, long variant = 0) {
    uint32_t up = (uint32_t)p;
    detail::mod_p_form f(l.gram, up);
    pvec x = pl.r1, y = pl.r2;
    if (f.q(x) != 0 || f.q(y) != 0 || f.t(x, y) != 0)
        throw not_isotropic("p2_neighbor: plane not totally isotropic");
    pvec wx = f.gram_times(x), wy = f.gram_times(y);
    // u1, u2 with T(x,u1)=1, T(y,u1)=0, T(x,u2)=0, T(y,u2)=1: solve the
    // 2x5 system; the functionals are independent for good p
    pmat m(2, RANK, up);
    for (int j = 0; j < RANK; j++) { m(0, j) = wx[j]; m(1, j) = wy[j]; }
    // find two columns forming an invertible 2x2 minor
    int c1 = -1, c2 = -1;
    for (int i = 0; i < RANK && c1 < 0; i++)
        for (int j = 0; j < RANK; j++) {
            if (i == j) continue;
            uint64_t d = ((uint64_t)m(0, i) * m(1, j) % up + (uint64_t)(up - 1) * m(0, j) % up * m(1, i)) % up;
            if (d) { c1 = i; c2 = j; break; }
        }
    if (c1 < 0) throw not_isotropic("p2_neighbor: degenerate pairing");
    auto solve2 = [&](uint32_t t1, uint32_t t2) {
        // vector v supported on {c1,c2} with T(x,v)=t1, T(y,v)=t2
        uint64_t a = m(0, c1), b = m(0, c2), c = m(1, c1), d = m(1, c2);
        uint64_t dt = (a * d % up + (up - 1) * (b * c % up)) % up;
        uint64_t idt = mod_inv(dt, up);
        pvec v{};
        v[c1] = (uint32_t)(((uint64_t)d * t1 % up + (uint64_t)(up - b % up) * t2 % up) % up * idt % up);
        v[c2] = (uint32_t)(((uint64_t)(up - c % up) * t1 % up + a * t2 % up) % up * idt % up);
        return v;
    };
    vec5 xl, yl;
    for (int i = 0; i < RANK; i++) { xl[i] = x[i]; yl[i] = y[i]; }
    uint32_t cx = (uint32_t)mod_long(-(l.q(xl) / p), p);
    uint32_t cy = (uint32_t)mod_long(-(l.q(yl) / p), p);
    uint32_t cxy = (uint32_t)mod_long(-(l.t(xl, yl) / p), p);
    if (variant < 0 || variant >= p) throw error("BadInput", "p2_neighbor: variant out of range");
    uint32_t bv = (uint32_t)variant;
    // base lift plus the variant shift: x gains p*bv*u_y, y loses p*bv*u_x
    // (u_x, u_y dual to the pair), keeping all three conditions mod p^2
    pvec a = solve2(cx, bv);                             // T(x,a)=cx, T(y,a)=bv
    pvec b = solve2((cxy + up - bv % up) % up, cy);      // T(x,b)=cxy-bv, T(y,b)=cy
    vec5 xp = xl, yp = yl;
    for (int i = 0; i < RANK; i++) { xp[i] += (int64_t)p * a[i]; yp[i] += (int64_t)p * b[i]; }
    Int p2 = Int(p) * p;
    if (l.q(xp) % p2 != 0 || l.q(yp) % p2 != 0 || l.t(xp, yp) % p2 != 0)
        throw error("Internal", "p2 lift failed");
    // generators: kernel of the two functionals + p e_k + x'/p + y'/p
    qmat gens(RANK, RANK + RANK + 2);
    int gcol = 0;
    for (int j = 0; j < RANK; j++) {
        // e_j adjusted to kill both functionals using columns c1, c2
        if (j == c1 || j == c2) continue;
        pvec adj = solve2(m(0, j), m(1, j));
        gens(j, gcol) = 1;
        gens(c1, gcol) = Rat((long)((up - adj[c1]) % up));
        gens(c2, gcol) = Rat((long)((up - adj[c2]) % up));
        gcol++;
    }
    for (int j = 0; j < RANK; j++) {
        gens(j, gcol) = Rat(p);
        gcol++;
    }
    for (int i = 0; i < RANK; i++) gens(i, gcol) = make_rat(xp[i], p);
    gcol++;
    for (int i = 0; i < RANK; i++) gens(i, gcol) = Rat((long)yp[i], p);
    qmat basis = detail::lattice_from_generators(gens, p);
    qmat gq = basis.transpose() * to_q(l.gram) * basis;
    if (!is_integral(gq)) throw error("Internal", "p2 neighbor gram not integral");
    neighbor_result r{basis, to_int(gq)};
    if (det(r.gram) != det(l.gram)) throw error("Internal", "p2 neighbor determinant changed");
    // elementary divisors of p * basis must be (1, 1, p, p^2, p^2)
    auto d = detail::snf_pattern(basis, p);
    std::vector<Int> want = {Int(1), Int(1), Int(p), p2, p2};
    if (d != want) throw error("Internal", "p2 neighbor index pattern wrong");
    return r;
}

}  // namespace omf
