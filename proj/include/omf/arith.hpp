#pragma once

// Basic exact arithmetic helpers on top of GMP: integer utilities,
// mod-p arithmetic in machine words, Legendre symbols, Tonelli-Shanks.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace omf {

using Int = mpz_class;
using Rat = mpq_class;

// Error taxonomy shared across the library.  what() carries a stable
// machine-readable code as its first token.
struct error : std::runtime_error {
    std::string code;
    error(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

inline error bad_prime(const std::string& m) { return error("BadPrime", m); }
inline error not_isotropic(const std::string& m) { return error("NotIsotropic", m); }
inline error not_in_genus(const std::string& m) { return error("NotInGenus", m); }
inline error non_integral(const std::string& m) { return error("NonIntegral", m); }
inline error search_exhausted(const std::string& m) { return error("SearchExhausted", m); }
inline error radical_trivial(const std::string& m) { return error("RadicalTrivial", m); }
inline error unsupported_weight(const std::string& m) { return error("UnsupportedWeight", m); }
inline error missing_eigenvalue(const std::string& m) { return error("MissingEigenvalue", m); }
inline error missing_factor(const std::string& m) { return error("MissingFactor", m); }
inline error not_commuting(const std::string& m) { return error("NotCommuting", m); }
inline error prime_too_small(const std::string& m) { return error("PrimeTooSmall", m); }
inline error insufficient_data(const std::string& m) { return error("InsufficientData", m); }
inline error not_found(const std::string& m) { return error("NotFound", m); }
inline error network_error(const std::string& m) { return error("NetworkError", m); }

// mpq_class(num, den) does not canonicalize; this does
inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}
inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

inline bool is_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }
inline bool is_prime(long n) { return is_prime(Int(n)); }

inline long ilog2(const Int& n) { return mpz_sizeinbase(n.get_mpz_t(), 2); }

inline Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// floor(sqrt(n)) for n >= 0
inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline int legendre(const Int& a, const Int& p) {
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}
inline int legendre(long a, long p) { return legendre(Int(a), Int(p)); }

inline long mod_long(const Int& a, long m) {
    Int r = a % m;
    long v = r.get_si();
    return v < 0 ? v + m : v;
}

inline std::vector<long> primes_up_to(long bound) {
    std::vector<long> ps;
    if (bound < 2) return ps;
    std::vector<bool> sieve(bound + 1, true);
    for (long i = 2; i <= bound; i++) {
        if (!sieve[i]) continue;
        ps.push_back(i);
        for (long j = 2 * i; j <= bound; j += i) sieve[j] = false;
    }
    return ps;
}

// distinct prime factorization of n > 0 by trial division (inputs here are small)
inline std::vector<std::pair<Int, int>> factorize(Int n) {
    std::vector<std::pair<Int, int>> fs;
    if (n < 0) n = -n;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; e++; }
            fs.push_back({p, e});
        }
    }
    if (n > 1) fs.push_back({n, 1});
    return fs;
}

inline std::vector<Int> squarefree_divisors(const Int& n) {
    std::vector<Int> ds = {1};
    for (auto& [p, e] : factorize(n)) {
        size_t k = ds.size();
        for (size_t i = 0; i < k; i++) ds.push_back(ds[i] * p);
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// ---- machine-word arithmetic mod p (p < 2^31) ----

inline uint64_t mod_pow(uint64_t b, uint64_t e, uint64_t p) {
    uint64_t r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline uint64_t mod_inv(uint64_t a, uint64_t p) {
    // p prime
    return mod_pow(a % p, p - 2, p);
}

// square root mod prime p, or -1 if a is a non-residue
inline int64_t sqrt_mod(uint64_t a, uint64_t p) {
    a %= p;
    if (p == 2) return a;
    if (a == 0) return 0;
    if (mod_pow(a, (p - 1) / 2, p) != 1) return -1;
    if (p % 4 == 3) return (int64_t)mod_pow(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    uint64_t q = p - 1, s = 0;
    while (q % 2 == 0) { q /= 2; s++; }
    uint64_t z = 2;
    while (mod_pow(z, (p - 1) / 2, p) != p - 1) z++;
    uint64_t m = s, c = mod_pow(z, q, p), t = mod_pow(a, q, p), r = mod_pow(a, (q + 1) / 2, p);
    while (t != 1) {
        uint64_t i = 0, tt = t;
        while (tt != 1) { tt = tt * tt % p; i++; }
        uint64_t b = mod_pow(c, uint64_t(1) << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return (int64_t)r;
}

// Garner-style CRT: x = r1 mod m1, x = r2 mod m2 (m1, m2 coprime), |x| minimal lift
inline Int crt_pair(const Int& r1, const Int& m1, const Int& r2, const Int& m2) {
    Int g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    Int m = m1 * m2;
    Int x = (r1 * v % m) * m2 + (r2 * u % m) * m1;
    x %= m;
    if (x < 0) x += m;
    return x;
}

// signed representative in (-m/2, m/2]
inline Int signed_lift(const Int& r, const Int& m) {
    Int x = r % m;
    if (x < 0) x += m;
    if (2 * x > m) x -= m;
    return x;
}

}  // namespace omf
