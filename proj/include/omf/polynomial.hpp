#pragma once

// Dense univariate polynomials, coefficients low-to-high.  Rational
// factorization is Zassenhaus: squarefree decomposition (Yun), a
// Cantor-Zassenhaus factorization mod a good word prime (picked among
// several candidates to minimize the modular factor count), quadratic
// Hensel lifting up a factor tree past the Landau-Mignotte bound, then
// subset recombination.  Degrees here stay modest (<= class number).

#include <map>

#include "omf/arith.hpp"

namespace omf {

using zpoly = std::vector<Int>;
using qpoly = std::vector<Rat>;

inline void ztrim(zpoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline void qtrim(qpoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const zpoly& f) { return (int)f.size() - 1; }  // -1 for zero
inline int degree(const qpoly& f) { return (int)f.size() - 1; }

inline zpoly zmul(const zpoly& a, const zpoly& b) {
    if (a.empty() || b.empty()) return {};
    zpoly c(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); i++) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); j++) c[i + j] += a[i] * b[j];
    }
    return c;
}

inline zpoly zadd(const zpoly& a, const zpoly& b) {
    zpoly c(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); i++) c[i] += a[i];
    for (size_t i = 0; i < b.size(); i++) c[i] += b[i];
    ztrim(c);
    return c;
}

inline zpoly zsub(const zpoly& a, const zpoly& b) {
    zpoly c(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); i++) c[i] += a[i];
    for (size_t i = 0; i < b.size(); i++) c[i] -= b[i];
    ztrim(c);
    return c;
}

inline zpoly zderiv(const zpoly& f) {
    zpoly d;
    for (size_t i = 1; i < f.size(); i++) d.push_back(Int((long)i) * f[i]);
    ztrim(d);
    return d;
}

inline Int zcontent(const zpoly& f) {
    Int c = 0;
    for (auto& x : f) c = gcd(c, x);
    return c;
}

inline zpoly zprimitive(const zpoly& f) {
    Int c = zcontent(f);
    if (c == 0) return f;
    if (f.back() < 0) c = -c;
    zpoly g = f;
    for (auto& x : g) x /= c;
    return g;
}

inline Int zeval(const zpoly& f, const Int& x) {
    Int v = 0;
    for (size_t i = f.size(); i-- > 0;) v = v * x + f[i];
    return v;
}

inline qpoly to_q(const zpoly& f) {
    qpoly g(f.size());
    for (size_t i = 0; i < f.size(); i++) g[i] = Rat(f[i]);
    return g;
}

inline zpoly to_z(const qpoly& f) {
    zpoly g(f.size());
    for (size_t i = 0; i < f.size(); i++) {
        if (f[i].get_den() != 1) throw error("NonIntegral", "polynomial not integral");
        g[i] = Int(f[i].get_num());
    }
    return g;
}

inline qpoly qmul(const qpoly& a, const qpoly& b) {
    if (a.empty() || b.empty()) return {};
    qpoly c(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); i++)
        for (size_t j = 0; j < b.size(); j++) c[i + j] += a[i] * b[j];
    return c;
}

inline qpoly qsub(const qpoly& a, const qpoly& b) {
    qpoly c(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); i++) c[i] += a[i];
    for (size_t i = 0; i < b.size(); i++) c[i] -= b[i];
    qtrim(c);
    return c;
}

// division with remainder over Q
inline std::pair<qpoly, qpoly> qdivmod(qpoly a, const qpoly& b) {
    if (b.empty()) throw error("DivideByZero", "polynomial division by zero");
    qpoly q;
    while (degree(a) >= degree(b)) {
        int shift = degree(a) - degree(b);
        Rat c = a.back() / b.back();
        if ((int)q.size() < shift + 1) q.resize(shift + 1, Rat(0));
        q[shift] += c;
        for (size_t i = 0; i < b.size(); i++) a[i + shift] -= c * b[i];
        qtrim(a);
    }
    return {q, a};
}

inline qpoly qmod(const qpoly& a, const qpoly& b) { return qdivmod(a, b).second; }

inline qpoly qgcd(qpoly a, qpoly b) {
    while (!b.empty()) {
        qpoly r = qmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty()) return a;
    Rat lead = a.back();
    for (auto& x : a) x /= lead;
    return a;
}

// exact division over Z; throws if not divisible
inline zpoly zdivexact(const zpoly& a, const zpoly& b) {
    auto [q, r] = qdivmod(to_q(a), to_q(b));
    if (!r.empty()) throw error("NotDivisible", "zdivexact");
    return to_z(q);
}

inline bool zdivides(const zpoly& b, const zpoly& a) {
    auto [q, r] = qdivmod(to_q(a), to_q(b));
    (void)q;
    return r.empty();
}

// ---- mod-p polynomial layer (p an odd word prime) ----

struct ppoly {
    uint64_t p;
    std::vector<uint64_t> c;  // low-to-high, c.back() != 0 unless zero

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    int deg() const { return (int)c.size() - 1; }
};

namespace detail {

inline ppoly pp_from(const zpoly& f, uint64_t p) {
    ppoly g{p, {}};
    g.c.resize(f.size());
    for (size_t i = 0; i < f.size(); i++) g.c[i] = (uint64_t)mod_long(f[i], (long)p);
    g.trim();
    return g;
}

inline ppoly pp_mul(const ppoly& a, const ppoly& b) {
    uint64_t p = a.p;
    if (a.c.empty() || b.c.empty()) return {p, {}};
    ppoly r{p, std::vector<uint64_t>(a.c.size() + b.c.size() - 1, 0)};
    for (size_t i = 0; i < a.c.size(); i++) {
        if (!a.c[i]) continue;
        for (size_t j = 0; j < b.c.size(); j++) r.c[i + j] = (r.c[i + j] + a.c[i] * b.c[j]) % p;
    }
    r.trim();
    return r;
}

inline std::pair<ppoly, ppoly> pp_divmod(ppoly a, const ppoly& b) {
    uint64_t p = a.p;
    ppoly q{p, {}};
    if (b.c.empty()) throw error("DivideByZero", "pp_divmod");
    uint64_t binv = mod_inv(b.c.back(), p);
    while (a.deg() >= b.deg()) {
        int shift = a.deg() - b.deg();
        uint64_t c = a.c.back() * binv % p;
        if ((int)q.c.size() < shift + 1) q.c.resize(shift + 1, 0);
        q.c[shift] = (q.c[shift] + c) % p;
        for (size_t i = 0; i < b.c.size(); i++) {
            uint64_t sub = c * b.c[i] % p;
            a.c[i + shift] = (a.c[i + shift] + p - sub) % p;
        }
        a.trim();
    }
    q.trim();
    return {q, a};
}

inline ppoly pp_mod(const ppoly& a, const ppoly& b) { return pp_divmod(a, b).second; }

inline ppoly pp_gcd(ppoly a, ppoly b) {
    while (!b.c.empty()) {
        ppoly r = pp_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.c.empty()) {
        uint64_t inv = mod_inv(a.c.back(), a.p);
        for (auto& x : a.c) x = x * inv % a.p;
    }
    return a;
}

inline ppoly pp_powmod(ppoly base, Int e, const ppoly& f) {
    ppoly r{f.p, {1}};
    base = pp_mod(base, f);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = pp_mod(pp_mul(r, base), f);
        base = pp_mod(pp_mul(base, base), f);
        e /= 2;
    }
    return r;
}

// extended gcd: returns (g, s, t) with s a + t b = g (g monic)
inline std::tuple<ppoly, ppoly, ppoly> pp_xgcd(ppoly a, ppoly b) {
    uint64_t p = a.p;
    ppoly s0{p, {1}}, s1{p, {}}, t0{p, {}}, t1{p, {1}};
    while (!b.c.empty()) {
        auto [q, r] = pp_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
        ppoly qs = pp_mul(q, s1);
        ppoly qt = pp_mul(q, t1);
        ppoly ns = s0, nt = t0;
        // ns = s0 - q s1
        ns.c.resize(std::max(ns.c.size(), qs.c.size()), 0);
        for (size_t i = 0; i < qs.c.size(); i++) ns.c[i] = (ns.c[i] + p - qs.c[i]) % p;
        ns.trim();
        nt.c.resize(std::max(nt.c.size(), qt.c.size()), 0);
        for (size_t i = 0; i < qt.c.size(); i++) nt.c[i] = (nt.c[i] + p - qt.c[i]) % p;
        nt.trim();
        s0 = std::move(s1);
        s1 = std::move(ns);
        t0 = std::move(t1);
        t1 = std::move(nt);
    }
    if (!a.c.empty()) {
        uint64_t inv = mod_inv(a.c.back(), p);
        for (auto& x : a.c) x = x * inv % p;
        for (auto& x : s0.c) x = x * inv % p;
        for (auto& x : t0.c) x = x * inv % p;
    }
    return {a, s0, t0};
}

// Cantor-Zassenhaus over F_p: f monic squarefree; deterministic sweep of
// splitting elements
inline void pp_equal_degree(const ppoly& f, int d, std::vector<ppoly>& out) {
    uint64_t p = f.p;
    if (f.deg() == d) {
        out.push_back(f);
        return;
    }
    Int e = (pow_int(Int((long)p), (unsigned long)d) - 1) / 2;
    for (uint64_t c = 0;; c++) {
        // try a = x + c, then shifted squares for stubborn cases
        ppoly a{p, {c % p, 1}};
        if (c >= p) {
            uint64_t c2 = c - p;
            a = ppoly{p, {c2 % p, (c2 / p + 1) % p, 1}};  // x^2 + ... deterministic drift
            a.trim();
        }
        ppoly w = pp_powmod(a, e, f);
        if (w.c.empty()) continue;
        w.c[0] = (w.c[0] + p - 1) % p;
        w.trim();
        ppoly g = pp_gcd(w, f);
        if (g.deg() <= 0 || g.deg() == f.deg()) continue;
        pp_equal_degree(g, d, out);
        pp_equal_degree(pp_divmod(f, g).first, d, out);
        return;
    }
}

inline std::vector<ppoly> pp_factor_squarefree(const ppoly& f0) {
    // distinct-degree then equal-degree splitting
    std::vector<ppoly> out;
    ppoly f = f0;
    uint64_t p = f.p;
    ppoly x{p, {0, 1}};
    ppoly h = x;
    int d = 0;
    while (f.deg() > 0) {
        d++;
        if (2 * d > f.deg()) {
            out.push_back(f);
            break;
        }
        h = pp_powmod(h, Int((long)p), f);
        ppoly hx = h;
        // h - x
        hx.c.resize(std::max<size_t>(hx.c.size(), 2), 0);
        hx.c[1] = (hx.c[1] + p - 1) % p;
        hx.trim();
        ppoly g = pp_gcd(hx, f);
        if (g.deg() > 0) {
            pp_equal_degree(g, d, out);
            f = pp_divmod(f, g).first;
            h = pp_mod(h, f);
        }
    }
    return out;
}

// quadratic Hensel step: f = g h mod m, s g + t h = 1 mod m  ->  same mod m^2
struct hensel_pair {
    zpoly g, h, s, t;
};

inline zpoly zmod_sym(const zpoly& f, const Int& m) {
    zpoly r = f;
    for (auto& x : r) x = signed_lift(x % m, m);
    ztrim(r);
    return r;
}

inline zpoly zmul_mod(const zpoly& a, const zpoly& b, const Int& m) {
    zpoly c = zmul(a, b);
    return zmod_sym(c, m);
}

// division in (Z/m)[x] by a monic polynomial
inline std::pair<zpoly, zpoly> zdivmod_monic_mod(zpoly a, const zpoly& b, const Int& m) {
    zpoly q;
    a = zmod_sym(a, m);
    while (degree(a) >= degree(b)) {
        int shift = degree(a) - degree(b);
        Int c = a.back();
        if ((int)q.size() < shift + 1) q.resize(shift + 1, Int(0));
        q[shift] = signed_lift((q[shift] + c) % m, m);
        for (size_t i = 0; i < b.size(); i++)
            a[i + shift] = signed_lift((a[i + shift] - c * b[i]) % m, m);
        ztrim(a);
    }
    ztrim(q);
    return {q, a};
}

inline hensel_pair hensel_step(const zpoly& f, hensel_pair hp, const Int& m) {
    // lift to modulus m^2; g monic
    Int m2 = m * m;
    zpoly e = zmod_sym(zsub(f, zmul(hp.g, hp.h)), m2);
    auto [q, r] = zdivmod_monic_mod(zmul_mod(hp.s, e, m2), hp.h, m2);
    zpoly g1 = zmod_sym(zadd(zadd(hp.g, zmul_mod(hp.t, e, m2)), zmul_mod(q, hp.g, m2)), m2);
    zpoly h1 = zmod_sym(zadd(hp.h, r), m2);
    // lift the Bezout pair
    zpoly b = zmod_sym(zsub(zsub({Int(1)}, zmul(hp.s, g1)), zmul(hp.t, h1)), m2);
    auto [c, dd] = zdivmod_monic_mod(zmul_mod(hp.s, b, m2), h1, m2);
    zpoly s1 = zmod_sym(zadd(hp.s, dd), m2);
    zpoly t1 = zmod_sym(zadd(zadd(hp.t, zmul_mod(hp.t, b, m2)), zmul_mod(c, g1, m2)), m2);
    return {g1, h1, s1, t1};
}

// lift a factorization f = prod(factors) mod p to modulus >= bound;
// f monic, factors monic mod p.  Binary tree of hensel pairs.
inline std::vector<zpoly> hensel_lift_tree(const zpoly& f, std::vector<ppoly> factors,
                                           uint64_t p, const Int& bound) {
    if (factors.size() == 1) {
        zpoly g = f;
        return {g};
    }
    size_t half = factors.size() / 2;
    std::vector<ppoly> left(factors.begin(), factors.begin() + half);
    std::vector<ppoly> right(factors.begin() + half, factors.end());
    ppoly gp{p, {1}}, hp_{p, {1}};
    for (auto& x : left) gp = pp_mul(gp, x);
    for (auto& x : right) hp_ = pp_mul(hp_, x);
    auto [one, s, t] = pp_xgcd(gp, hp_);
    if (one.deg() != 0) throw error("Internal", "hensel: factors not coprime");
    auto lift_z = [&](const ppoly& a) {
        zpoly r(a.c.size());
        for (size_t i = 0; i < a.c.size(); i++) r[i] = signed_lift(Int((long)a.c[i]), Int((long)p));
        return r;
    };
    hensel_pair pair{lift_z(gp), lift_z(hp_), lift_z(s), lift_z(t)};
    Int m((long)p);
    while (m < bound) {
        pair = hensel_step(f, pair, m);
        m = m * m;
    }
    auto lhs = hensel_lift_tree(pair.g, left, p, bound);
    auto rhs = hensel_lift_tree(pair.h, right, p, bound);
    // recursive calls need the lifted subproducts mod m; do them directly
    // here instead: factor lists below are lifted against pair.g / pair.h
    lhs.insert(lhs.end(), rhs.begin(), rhs.end());
    return lhs;
}

}  // namespace detail

// squarefree decomposition (Yun): returns list of (factor, multiplicity)
inline std::vector<std::pair<zpoly, int>> squarefree_decomposition(const zpoly& f0) {
    std::vector<std::pair<zpoly, int>> out;
    zpoly f = zprimitive(f0);
    if (degree(f) <= 0) return out;
    qpoly a = to_q(f), d = to_q(zderiv(f));
    qpoly g = qgcd(a, d);
    if (degree(g) == 0) {
        out.push_back({f, 1});
        return out;
    }
    qpoly w = qdivmod(a, g).first;
    qpoly y = qdivmod(d, g).first;
    int mult = 1;
    while (degree(w) > 0) {
        qpoly z = qsub(y, [&] {
            qpoly wd;
            for (size_t i = 1; i < w.size(); i++) wd.push_back(w[i] * Rat((long)i));
            return wd;
        }());
        qpoly u = qgcd(w, z);
        if (degree(u) > 0) {
            zpoly fac = zprimitive(to_z([&] {
                qpoly uu = u;
                Int den = 1;
                for (auto& x : uu) den = lcm(den, Int(x.get_den()));
                for (auto& x : uu) x *= Rat(den);
                return uu;
            }()));
            out.push_back({fac, mult});
        }
        w = qdivmod(w, u).first;
        y = qdivmod(z, u).first;
        mult++;
    }
    return out;
}

std::vector<zpoly> factor_squarefree(const zpoly& f0);

namespace detail {

// monic squarefree factorization core
inline std::vector<zpoly> factor_monic_squarefree(const zpoly& f) {
    int n = degree(f);
    if (n == 1) return {f};
    // prime selection: f squarefree mod p, fewest modular factors wins
    std::vector<ppoly> best;
    uint64_t best_p = 0;
    int tried = 0;
    for (long p = 3; tried < 4; p += 2) {
        if (!is_prime(p)) continue;
        ppoly fp = pp_from(f, (uint64_t)p);
        if (fp.deg() != n) continue;
        ppoly fd = pp_from(zderiv(f), (uint64_t)p);
        if (pp_gcd(fp, fd).deg() != 0) continue;
        tried++;
        auto facs = pp_factor_squarefree(fp);
        if (best.empty() || facs.size() < best.size()) {
            best = facs;
            best_p = (uint64_t)p;
        }
        if (best.size() == 1) break;
    }
    if (best.size() == 1) return {f};
    std::sort(best.begin(), best.end(),
              [](const ppoly& a, const ppoly& b) { return a.c < b.c; });
    // Landau-Mignotte: factors of monic f have coefficients bounded by
    // 2^n * ||f||_2
    Int norm2 = 0;
    for (auto& c : f) norm2 += c * c;
    Int bound = (isqrt(norm2) + 1) * pow_int(Int(2), (unsigned long)n);
    Int lift_bound = 2 * bound + 1;
    auto lifted = hensel_lift_tree(f, best, best_p, lift_bound);
    Int lift_mod((long)best_p);
    while (lift_mod < lift_bound) lift_mod = lift_mod * lift_mod;

    std::vector<zpoly> result;
    std::vector<zpoly> pool = lifted;
    zpoly rem = f;
    size_t take = 1;
    while (2 * take <= pool.size()) {
        bool accepted = false;
        std::vector<int> idx(take);
        std::function<bool(size_t, size_t)> comb = [&](size_t start, size_t k) -> bool {
            if (k == take) {
                zpoly trial = {Int(1)};
                for (size_t t = 0; t < take; t++)
                    trial = zmod_sym(zmul(trial, pool[(size_t)idx[t]]), lift_mod);
                if (!zdivides(trial, rem)) return false;
                result.push_back(trial);
                rem = zdivexact(rem, trial);
                std::vector<zpoly> np;
                for (size_t t = 0, ti = 0; t < pool.size(); t++) {
                    if (ti < take && t == (size_t)idx[ti]) { ti++; continue; }
                    np.push_back(pool[t]);
                }
                pool = np;
                return true;
            }
            for (size_t i = start; i + (take - k) <= pool.size(); i++) {
                idx[k] = (int)i;
                if (comb(i + 1, k + 1)) return true;
            }
            return false;
        };
        accepted = comb(0, 0);
        if (!accepted) take++;
    }
    if (degree(rem) > 0) result.push_back(rem);
    return result;
}

}  // namespace detail

// factor a squarefree primitive polynomial over Z (irreducible factors,
// each primitive with positive leading coefficient, sorted)
inline std::vector<zpoly> factor_squarefree(const zpoly& f0) {
    zpoly f = zprimitive(f0);
    int n = degree(f);
    if (n <= 0) return {};
    std::vector<zpoly> result;
    if (f.back() == 1) {
        result = detail::factor_monic_squarefree(f);
    } else {
        // substitute to a monic polynomial: fm(x) = lc^(n-1) f(x/lc)
        Int lc = f.back();
        zpoly fm(f.size());
        fm[n] = 1;
        for (int i = 0; i < n; i++) fm[i] = f[i] * pow_int(lc, (unsigned long)(n - 1 - i));
        for (auto& h : detail::factor_monic_squarefree(zprimitive(fm))) {
            // map back: primitive part of h(lc x)
            zpoly g(h.size());
            for (size_t i = 0; i < h.size(); i++) g[i] = h[i] * pow_int(lc, (unsigned long)i);
            result.push_back(zprimitive(g));
        }
    }
    std::sort(result.begin(), result.end(), [](const zpoly& a, const zpoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    return result;
}

// full factorization: content ignored, returns (irreducible, multiplicity)
inline std::vector<std::pair<zpoly, int>> factor(const zpoly& f) {
    std::vector<std::pair<zpoly, int>> out;
    for (auto& [sq, mult] : squarefree_decomposition(f))
        for (auto& irr : factor_squarefree(sq)) out.push_back({irr, mult});
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return std::lexicographical_compare(a.first.begin(), a.first.end(), b.first.begin(),
                                            b.first.end());
    });
    return out;
}

inline bool is_irreducible(const zpoly& f) {
    auto fs = factor(f);
    return fs.size() == 1 && fs[0].second == 1;
}

}  // namespace omf
