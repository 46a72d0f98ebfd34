#pragma once

// Small exact-integer utilities on top of gmpxx.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pgt {

inline bool is_perfect_square(const mpz_class& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline mpz_class isqrt(const mpz_class& n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline mpz_class mod_floor(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline mpz_class lcm(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline mpz_class gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// n / d in lowest terms.
inline mpq_class rational(const mpz_class& n, const mpz_class& d) {
    mpq_class q(n, d);
    q.canonicalize();
    return q;
}

inline bool is_probable_prime(const mpz_class& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

inline std::int64_t to_i64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits: " + z.get_str());
    return z.get_si();
}

/// Result of trial division: prime powers found plus the unfactored cofactor.
struct TrialFactorization {
    std::vector<std::pair<mpz_class, unsigned>> factors;
    mpz_class cofactor = 1;
};

/// Trial division of |n| by primes up to `bound`. The cofactor is either 1,
/// a prime (when it is below bound^2), or a number all of whose prime factors
/// exceed `bound`.
inline TrialFactorization trial_factor(const mpz_class& n_in, unsigned long bound) {
    TrialFactorization out;
    mpz_class n = abs(n_in);
    if (n == 0) {
        out.cofactor = 0;
        return out;
    }
    auto take = [&](unsigned long p) {
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        if (e) out.factors.emplace_back(mpz_class(p), e);
    };
    take(2);
    take(3);
    for (unsigned long p = 5; p <= bound; p += 6) {
        if (mpz_class(p) * p > n) break;
        take(p);
        take(p + 2);
    }
    if (n > 1 && n <= mpz_class(bound) * bound) {
        out.factors.emplace_back(n, 1);
        n = 1;
    }
    out.cofactor = n;
    return out;
}

inline std::vector<long> divisors(long n) {
    std::vector<long> small, large;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline std::vector<long> primes_up_to(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> sieve(static_cast<size_t>(n + 1), true);
    for (long i = 2; i <= n; ++i) {
        if (!sieve[static_cast<size_t>(i)]) continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i) sieve[static_cast<size_t>(j)] = false;
    }
    return out;
}

inline long mod_pow(long b, long e, long m) {
    __int128 r = 1 % m, x = ((b % m) + m) % m;
    while (e > 0) {
        if (e & 1) r = (r * x) % m;
        x = (x * x) % m;
        e >>= 1;
    }
    return static_cast<long>(r);
}

inline long mod_inverse(long a, long m) {
    long g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
    while (a1 != 0) {
        long q = g / a1;
        long t = g - q * a1;
        g = a1;
        a1 = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) return 0;
    return ((x % m) + m) % m;
}

}  // namespace pgt
