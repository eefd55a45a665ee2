#pragma once

// Sieving on the arithmetic progression k*2^n + 1 over k. For every odd
// prime p <= S there is exactly one residue class k0(p) with
// p | k*2^n + 1  <=>  k = k0 (mod p), so eliminating a segment of k values
// costs one modular inversion per prime plus a strided walk. Only odd k are
// represented (even k fold into the exponent under normalization).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "prothladder/errors.hpp"
#include "prothladder/natural.hpp"
#include "prothladder/primality.hpp"

namespace prothladder::sieve {

/// Ascending list of all primes <= bound.
using SmallPrimeTable = std::vector<std::uint32_t>;

inline SmallPrimeTable small_primes(std::uint32_t bound) {
    if (bound < 2) throw PreconditionError("small_primes: bound must be >= 2");
    std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
    SmallPrimeTable out;
    for (std::uint32_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= bound; j += i)
            composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

/// The unique k0 in [0, p) with p | k*2^n + 1 <=> k = k0 (mod p), i.e.
/// k0 = -(2^n)^-1 mod p. p must be an odd prime (2 never divides k*2^n + 1).
inline std::uint32_t residue_class(std::uint32_t p, unsigned n) {
    if (p == 2) throw PreconditionError("residue_class: p = 2 never divides k*2^n + 1");
    if (p < 3) throw PreconditionError("residue_class: p must be an odd prime");
    std::uint64_t t = powmod_u64(2, n, p);          // 2^n mod p
    std::uint64_t inv = powmod_u64(t, p - 2, p);    // Fermat inverse
    return static_cast<std::uint32_t>((p - inv) % p);
}

/// A sieved range of odd k in [k_lo, k_hi): bit i represents
/// k = k_first + 2i where k_first is k_lo rounded up to odd. A set bit means
/// k*2^n + 1 has no odd prime factor <= sieve_bound, except that a candidate
/// equal to a small prime itself is kept (self-prime exception).
struct SieveSegment {
    unsigned n = 1;
    Natural k_lo;
    Natural k_hi;
    std::uint32_t sieve_bound = 2;
    Natural k_first;
    std::size_t width = 0; // number of odd k represented
    std::vector<std::uint64_t> words;

    bool bit(std::size_t i) const {
        return (words[i >> 6] >> (i & 63)) & 1;
    }

    Natural k_at(std::size_t i) const { return k_first + 2 * Natural(i); }

    bool in_range(const Natural& k) const {
        return k >= k_lo && k < k_hi && (k & 1) != 0;
    }

    /// Survival lookup for an odd k inside [k_lo, k_hi).
    bool survives(const Natural& k) const {
        if (!in_range(k))
            throw PreconditionError("SieveSegment::survives: k outside segment");
        return bit(static_cast<std::size_t>(to_u64((k - k_first) >> 1)));
    }

    std::vector<Natural> survivors() const {
        std::vector<Natural> out;
        for (std::size_t i = 0; i < width; ++i)
            if (bit(i)) out.push_back(k_at(i));
        return out;
    }
};

inline SieveSegment sieve_segment(unsigned n, const Natural& k_lo, const Natural& k_hi,
                                  const SmallPrimeTable& table) {
    if (k_lo < 1) throw PreconditionError("sieve_segment: k_lo must be >= 1");
    if (!(k_lo < k_hi)) throw PreconditionError("sieve_segment: empty range");

    SieveSegment seg;
    seg.n = n;
    seg.k_lo = k_lo;
    seg.k_hi = k_hi;
    seg.sieve_bound = table.empty() ? 2 : table.back();
    seg.k_first = (k_lo & 1) != 0 ? k_lo : k_lo + 1;

    if (seg.k_first >= k_hi) {
        seg.width = 0;
        return seg;
    }
    Natural span = (k_hi - seg.k_first + 1) >> 1;
    if (!fits_u64(span) || to_u64(span) > (std::uint64_t(1) << 40))
        throw PreconditionError("sieve_segment: segment too wide");
    seg.width = static_cast<std::size_t>(to_u64(span));
    seg.words.assign((seg.width + 63) / 64, ~std::uint64_t(0));

    for (std::uint32_t p : table) {
        if (p == 2) continue;
        const std::uint32_t k0 = residue_class(p, n);
        // first index i >= 0 with k_first + 2i = k0 (mod p)
        const std::uint32_t kf_mod = static_cast<std::uint32_t>(seg.k_first % p);
        const std::uint64_t diff = (k0 + p - kf_mod) % p;
        std::uint64_t i = (diff * ((p + 1) / 2)) % p; // divide by 2 mod p

        // k with k*2^n + 1 == p survives even though p divides it.
        std::uint64_t self_index = ~std::uint64_t(0);
        if (n < 32 && ((p - 1) & ((std::uint64_t(1) << n) - 1)) == 0) {
            const std::uint32_t k_self = (p - 1) >> n;
            if ((k_self & 1) != 0 && Natural(k_self) >= seg.k_first && Natural(k_self) < k_hi)
                self_index = to_u64((Natural(k_self) - seg.k_first) >> 1);
        }

        for (; i < seg.width; i += p) {
            if (i == self_index) continue;
            seg.words[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
        }
    }
    return seg;
}

} // namespace prothladder::sieve
