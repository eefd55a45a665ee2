#pragma once

// Deterministic primality confirmation policy: trial division by the primes
// up to 100, then a fixed-witness strong-probable-prime battery below 2^64,
// and a base-2 strong test plus a strong Lucas test (Selfridge parameters)
// above. No probabilistic acceptance anywhere.

#include <array>
#include <cstdint>

#include "prothladder/natural.hpp"

namespace prothladder {

inline constexpr std::array<std::uint32_t, 25> trial_division_primes = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

// Strong-probable-prime witnesses; this set is deterministic for all n < 2^64.
inline constexpr std::array<std::uint32_t, 12> spsp_witnesses_u64 = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t r = 1 % mod;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) r = mulmod_u64(r, base, mod);
        base = mulmod_u64(base, base, mod);
        exp >>= 1;
    }
    return r;
}

/// Strong-probable-prime test for odd n >= 3, 64-bit path.
inline bool strong_probable_prime_u64(std::uint64_t n, std::uint64_t base) {
    base %= n;
    if (base == 0) return true;
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    std::uint64_t x = powmod_u64(base, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int r = 1; r < s; ++r) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint32_t p : trial_division_primes) {
        if (n % p == 0) return n == p;
    }
    if (n < 101 * 101) return true;
    for (std::uint32_t a : spsp_witnesses_u64) {
        if (!strong_probable_prime_u64(n, a)) return false;
    }
    return true;
}

/// Strong-probable-prime test for odd n >= 3, arbitrary precision.
inline bool strong_probable_prime(const Natural& n, const Natural& base) {
    Natural b = base % n;
    if (b == 0) return true;
    Natural d = n - 1;
    unsigned s = boost::multiprecision::lsb(d);
    d >>= s;
    Natural x = boost::multiprecision::powm(b, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

inline bool is_perfect_square(const Natural& n) {
    if (n < 0) return false;
    Natural r = boost::multiprecision::sqrt(n);
    return r * r == n;
}

namespace detail {

// Jacobi symbol restricted to what the Lucas parameter search needs:
// numerator may be negative, denominator odd and positive.
inline int jacobi_signed(long long a, const Natural& n) {
    Natural x = a < 0 ? Natural(-a) : Natural(a);
    int sign = 1;
    if (a < 0 && (n % 4) == 3) sign = -sign;
    Natural m = n;
    x %= m;
    while (x != 0) {
        unsigned tz = boost::multiprecision::lsb(x);
        x >>= tz;
        if (tz & 1) {
            unsigned m8 = static_cast<unsigned>(m % 8);
            if (m8 == 3 || m8 == 5) sign = -sign;
        }
        if ((x % 4) == 3 && (m % 4) == 3) sign = -sign;
        std::swap(x, m);
        x %= m;
    }
    return m == 1 ? sign : 0;
}

} // namespace detail

/// Strong Lucas probable-prime test with Selfridge's parameter choice:
/// the first D in 5, -7, 9, -11, ... with (D/n) = -1; P = 1, Q = (1 - D)/4.
/// Requires n odd, n >= 3, and n not a perfect square.
inline bool strong_lucas_probable_prime(const Natural& n) {
    long long d_abs = 5;
    int d_sign = 1;
    long long D = 0;
    for (;;) {
        long long cand = d_sign * d_abs;
        int j = detail::jacobi_signed(cand, n);
        if (j == 0) return false; // shares a factor with n
        if (j == -1) {
            D = cand;
            break;
        }
        d_abs += 2;
        d_sign = -d_sign;
    }
    const long long P = 1;
    const long long Qll = (1 - D) / 4;
    const Natural Q = Qll >= 0 ? Natural(Qll) % n : (n - Natural(-Qll) % n) % n;
    const Natural Dn = D >= 0 ? Natural(D) % n : (n - Natural(-D) % n) % n;

    Natural delta = n + 1;
    unsigned s = boost::multiprecision::lsb(delta);
    Natural t = delta >> s;

    auto halve = [&](Natural v) { // v/2 mod n for odd n
        if ((v & 1) != 0) v += n;
        return (v >> 1) % n;
    };

    // Compute U_t, V_t, Q^t by a left-to-right binary chain.
    Natural u = 1, v = P % n, qk = Q % n;
    unsigned bits = boost::multiprecision::msb(t);
    for (unsigned i = bits; i-- > 0;) {
        // double: (U, V, Q^k) -> (U*V, V^2 - 2Q^k, Q^2k)
        u = (u * v) % n;
        v = (v * v + 2 * n * n - 2 * qk) % n;
        qk = (qk * qk) % n;
        if (boost::multiprecision::bit_test(t, i)) {
            // increment: U' = (P*U + V)/2, V' = (D*U + P*V)/2
            Natural u2 = halve(P * u + v);
            Natural v2 = halve(Dn * u + P * v);
            u = u2;
            v = v2;
            qk = (qk * Q) % n;
        }
    }

    if (u == 0 || v == 0) return true;
    for (unsigned r = 1; r < s; ++r) {
        v = (v * v + 2 * n * n - 2 * qk) % n;
        qk = (qk * qk) % n;
        if (v == 0) return true;
    }
    return false;
}

/// The deterministic confirmation policy for general primes.
inline bool is_prime(const Natural& n) {
    if (n < 2) return false;
    for (std::uint32_t p : trial_division_primes) {
        if (n % p == 0) return n == p;
    }
    if (fits_u64(n)) {
        std::uint64_t v = to_u64(n);
        if (v < 101 * 101) return true;
        for (std::uint32_t a : spsp_witnesses_u64) {
            if (!strong_probable_prime_u64(v, a)) return false;
        }
        return true;
    }
    if (!strong_probable_prime(n, 2)) return false;
    if (is_perfect_square(n)) return false;
    return strong_lucas_probable_prime(n);
}

} // namespace prothladder
