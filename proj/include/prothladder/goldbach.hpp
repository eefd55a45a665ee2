#pragma once

// Binary Goldbach verification over [4, G] against an in-memory prime
// bitmap, and the composition step: a ladder seeded at 3 whose gaps stay
// within G - 2 proves every odd m in [7, last rung + G - 2] is a sum of
// three primes, with an explicit decomposition for each.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "prothladder/errors.hpp"
#include "prothladder/ladder.hpp"
#include "prothladder/natural.hpp"
#include "prothladder/primality.hpp"

namespace prothladder::goldbach {

/// Primality bitmap for [0, bound] plus the verification status of the
/// binary Goldbach property over the even numbers in [4, bound].
struct BinaryTable {
    std::uint64_t bound = 0;
    std::vector<std::uint64_t> words;
    bool verified = false;
    std::uint64_t counterexample = 0; // first failing even m, 0 when none
    std::uint64_t prime_count = 0;

    bool is_prime_below(std::uint64_t v) const {
        if (v > bound) throw PreconditionError("BinaryTable: value beyond table bound");
        return (words[v >> 6] >> (v & 63)) & 1;
    }

    /// Smallest-p decomposition m = p + q of an even m in [4, bound].
    std::pair<std::uint64_t, std::uint64_t> decompose_even(std::uint64_t m) const {
        if (m < 4 || m > bound || (m & 1) != 0)
            throw PreconditionError("decompose_even: requires even m in [4, bound]");
        if (m == 4) return {2, 2};
        for (std::uint64_t p = 3; p <= m / 2; p += 2) {
            if (is_prime_below(p) && is_prime_below(m - p)) return {p, m - p};
        }
        throw Error("decompose_even: no prime pair for " + std::to_string(m));
    }
};

/// Memory guard: the table is an in-memory bitmap, one bit per integer.
inline constexpr std::uint64_t binary_table_max_bound = std::uint64_t(1) << 33;

/// Sieves [0, G] and checks that every even m in [4, G] splits into two
/// primes. A counterexample is reported in the table, not thrown.
inline BinaryTable verify_binary_range(const Natural& bound) {
    if (bound < 4) throw PreconditionError("verify_binary_range: bound must be >= 4");
    if (!fits_u64(bound) || to_u64(bound) > binary_table_max_bound)
        throw PreconditionError("verify_binary_range: bound exceeds in-memory limit");

    BinaryTable t;
    t.bound = to_u64(bound);
    t.words.assign(static_cast<std::size_t>(t.bound / 64 + 1), ~std::uint64_t(0));
    auto clear = [&](std::uint64_t v) { t.words[v >> 6] &= ~(std::uint64_t(1) << (v & 63)); };
    clear(0);
    if (t.bound >= 1) clear(1);
    for (std::uint64_t i = 2; i * i <= t.bound; ++i) {
        if (!t.is_prime_below(i)) continue;
        for (std::uint64_t j = i * i; j <= t.bound; j += i) clear(j);
    }
    for (std::uint64_t v = 2; v <= t.bound; ++v)
        if (t.is_prime_below(v)) ++t.prime_count;

    for (std::uint64_t m = 4; m <= t.bound; m += 2) {
        bool found = false;
        if (t.is_prime_below(m - 2)) {
            found = true; // p = 2 pairs only with m - 2 prime (m = 4 included)
        } else {
            for (std::uint64_t p = 3; p <= m / 2; p += 2) {
                if (t.is_prime_below(p) && t.is_prime_below(m - p)) {
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            t.counterexample = m;
            t.verified = false;
            return t;
        }
    }
    t.verified = true;
    return t;
}

/// An explicit three-prime decomposition; p1 is the ladder rung used.
struct TernaryWitness {
    Natural m;
    Natural p1;
    Natural p2;
    Natural p3;
};

/// The bound T = last rung + G - 2 up to which the ladder plus the verified
/// binary table proves every odd m >= 7 is a sum of three primes.
inline Natural coverage_bound(const ladder::Ladder& lad, const BinaryTable& table) {
    if (!table.verified)
        throw PreconditionError("coverage_bound: binary table not verified");
    if (lad.rungs.empty() || lad.rungs.front().value != 3)
        throw PreconditionError("coverage_bound: ladder must be seeded at rung 3");
    if (!(lad.max_gap() <= Natural(table.bound) - 2))
        throw PreconditionError("coverage_bound: ladder gap exceeds binary bound - 2");
    return lad.last_value() + table.bound - 2;
}

/// Decomposes odd m in [7, coverage_bound]: p1 = largest rung <= m - 4,
/// then the smallest-p binary split of the even remainder. All three parts
/// are re-confirmed by the deterministic policy before the witness returns.
/// The per-call range check uses last rung + bound - 2 directly; a ladder
/// violating the gap precondition surfaces as an uncoverable remainder.
inline TernaryWitness ternary_decompose(const Natural& m, const ladder::Ladder& lad,
                                        const BinaryTable& table) {
    if (!table.verified)
        throw PreconditionError("ternary_decompose: binary table not verified");
    if (lad.rungs.empty() || lad.rungs.front().value != 3)
        throw PreconditionError("ternary_decompose: ladder must be seeded at rung 3");
    const Natural limit = lad.last_value() + table.bound - 2;
    if ((m & 1) == 0) throw OutOfRangeError("ternary_decompose: m must be odd");
    if (m < 7 || m > limit)
        throw OutOfRangeError("ternary_decompose: m outside [7, " + to_decimal(limit) + "]");

    const Natural target = m - 4;
    std::size_t lo = 0, hi = lad.rungs.size();
    while (hi - lo > 1) { // largest rung <= target; rung values ascend
        std::size_t mid = lo + (hi - lo) / 2;
        if (lad.rungs[mid].value <= target)
            lo = mid;
        else
            hi = mid;
    }
    const Natural& p1 = lad.rungs[lo].value;
    const Natural e = m - p1;
    if (e < 4 || e > table.bound || (e & 1) != 0)
        throw Error("ternary_decompose: remainder " + to_decimal(e) + " not coverable");

    auto [p2, p3] = table.decompose_even(to_u64(e));
    TernaryWitness w{m, p1, Natural(p2), Natural(p3)};
    if (w.p1 + w.p2 + w.p3 != m || !is_prime(w.p1) || !is_prime(w.p2) || !is_prime(w.p3))
        throw Error("ternary_decompose: witness failed re-verification for m = " + to_decimal(m));
    return w;
}

} // namespace prothladder::goldbach
