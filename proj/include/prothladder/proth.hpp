#pragma once

// Proth primality kernel. A Proth number N = k*2^n + 1 with k < 2^n is
// proved prime by exhibiting a witness a with Jacobi symbol (a/N) = -1 and
// a^((N-1)/2) = -1 (mod N). The witness search scans the primes up to a
// small bound B in increasing order and commits to the first quadratic
// non-residue it finds, so a negative exponentiation result is a proof of
// compositeness while exhausting the table is merely inconclusive.

#include <cstdint>
#include <utility>
#include <vector>

#include "prothladder/errors.hpp"
#include "prothladder/natural.hpp"

namespace prothladder::proth {

/// A candidate N = k*2^n + 1 held as the pair (k, n).
struct ProthForm {
    Natural k;
    unsigned n = 1;

    ProthForm(Natural k_, unsigned n_) : k(std::move(k_)), n(n_) {
        if (k < 1) throw PreconditionError("ProthForm: k must be >= 1");
        if (n < 1) throw PreconditionError("ProthForm: n must be >= 1");
    }

    /// Canonical form: factors of 2 in k folded into the exponent. The value
    /// k*2^n + 1 is unchanged; only the representation is.
    static ProthForm normalized(Natural k_, unsigned n_) {
        if (k_ < 1) throw PreconditionError("ProthForm: k must be >= 1");
        while ((k_ & 1) == 0) {
            k_ >>= 1;
            ++n_;
        }
        return ProthForm(std::move(k_), n_);
    }

    Natural value() const { return (k << n) + 1; }
    bool odd_k() const { return (k & 1) != 0; }
    bool eligible() const { return k < pow2(n); }

    bool operator==(const ProthForm&) const = default;
};

enum class ProthOutcome : std::uint8_t { prime, composite, no_witness };

/// Outcome of a Proth test. `witness` is the prime the test committed to
/// (the certificate entry for `prime`, the refuting base for `composite`),
/// and 0 for `no_witness`.
struct ProthResult {
    ProthOutcome outcome;
    std::uint32_t witness = 0;

    bool is_prime() const { return outcome == ProthOutcome::prime; }
};

/// Jacobi symbol (a/n) for odd n >= 1, by binary reduction with quadratic
/// reciprocity. Returns 0 exactly when gcd(a, n) > 1.
inline int jacobi(Natural a, Natural n) {
    if (n < 1 || (n & 1) == 0)
        throw PreconditionError("jacobi: modulus must be odd and >= 1");
    a %= n;
    int sign = 1;
    while (a != 0) {
        unsigned tz = boost::multiprecision::lsb(a);
        a >>= tz;
        if (tz & 1) {
            unsigned n8 = static_cast<unsigned>(n % 8);
            if (n8 == 3 || n8 == 5) sign = -sign;
        }
        if ((a % 4) == 3 && (n % 4) == 3) sign = -sign;
        std::swap(a, n);
        a %= n;
    }
    return n == 1 ? sign : 0;
}

/// base^exponent mod modulus by left-to-right binary exponentiation.
/// This scan order is the builder kernel; the certificate checker carries
/// its own right-to-left implementation.
inline Natural mod_pow(Natural base, const Natural& exponent, const Natural& modulus) {
    if (modulus < 2) throw PreconditionError("mod_pow: modulus must be >= 2");
    base %= modulus;
    if (exponent == 0) return Natural(1);
    if (base == 0) return Natural(0);
    Natural r = base;
    for (unsigned i = boost::multiprecision::msb(exponent); i-- > 0;) {
        r = (r * r) % modulus;
        if (boost::multiprecision::bit_test(exponent, i))
            r = (r * base) % modulus;
    }
    return r;
}

/// Ascending primes <= bound used as witness candidates. B = 29 gives the
/// fixed ten-entry table; other bounds are generated on the fly.
inline std::vector<std::uint32_t> witness_primes(std::uint32_t bound) {
    static const std::vector<std::uint32_t> table29 = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    if (bound < 2) throw PreconditionError("witness_primes: bound must be >= 2");
    if (bound == 29) return table29;
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 2; c <= bound; ++c) {
        bool composite = false;
        for (std::uint32_t d = 2; d * d <= c; ++d) {
            if (c % d == 0) {
                composite = true;
                break;
            }
        }
        if (!composite) out.push_back(c);
    }
    return out;
}

/// Proth's theorem test with witness bound B. Requires the canonical odd-k
/// form and k < 2^n. Sound: `prime` is never returned for a composite.
/// Incomplete: a true prime may come back `no_witness` when every prime
/// <= B is a quadratic residue mod N.
inline ProthResult proth_test(const ProthForm& form, std::uint32_t witness_bound) {
    if (!form.odd_k())
        throw PreconditionError("proth_test: k must be odd (normalize first)");
    if (!form.eligible())
        throw PreconditionError("proth_test: requires k < 2^n");
    const Natural N = form.value();
    const Natural half = (N - 1) >> 1;
    for (std::uint32_t p : witness_primes(witness_bound)) {
        if (jacobi(Natural(p), N) == -1) {
            if (mod_pow(Natural(p), half, N) == N - 1)
                return {ProthOutcome::prime, p};
            return {ProthOutcome::composite, p};
        }
    }
    return {ProthOutcome::no_witness, 0};
}

/// Re-checks a stored (k, n, a) claim with a caller-supplied modular
/// exponentiation. Pure: no witness search, no normalization; false on any
/// violated condition.
template <typename PowFn>
bool verify_certificate_with(const ProthForm& form, const Natural& a, PowFn&& pow_fn) {
    if (!form.eligible()) return false;
    const Natural N = form.value();
    if (jacobi(a, N) != -1) return false;
    return pow_fn(a, (N - 1) >> 1, N) == N - 1;
}

inline bool verify_certificate(const ProthForm& form, const Natural& a) {
    return verify_certificate_with(form, a, [](const Natural& b, const Natural& e, const Natural& m) {
        return mod_pow(b, e, m);
    });
}

} // namespace prothladder::proth
