#include "oracles.hpp"

#include <stdexcept>

namespace oracle {

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t prev_prime_u64(std::uint64_t x) {
    if (x < 3) throw std::invalid_argument("prev_prime_u64: x >= 3");
    for (std::uint64_t c = x - 1;; --c) {
        if (is_prime_u64(c)) return c;
        if (c == 2) return 2;
    }
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<bool> comp(static_cast<std::size_t>(limit) + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = std::uint64_t(i) * i; j <= limit; j += i) comp[j] = true;
    }
    return out;
}

namespace {

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    unsigned __int128 r = 1, base = b % m;
    while (e > 0) {
        if (e & 1) r = r * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

} // namespace

int legendre(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    std::uint64_t e = powmod(a, (p - 1) / 2, p);
    if (e == 1) return 1;
    if (e == p - 1) return -1;
    throw std::logic_error("legendre: p is not an odd prime");
}

int jacobi_by_factorization(std::uint64_t a, std::uint64_t n) {
    if (n == 1) return 1;
    int result = 1;
    std::uint64_t rest = n;
    for (std::uint64_t p = 3; p * p <= rest; p += 2) {
        while (rest % p == 0) {
            result *= legendre(a, p);
            rest /= p;
        }
    }
    if (rest > 1) result *= legendre(a, rest);
    return result;
}

bool sieve_survives(const Natural& k, unsigned n, std::uint32_t sieve_bound) {
    return sieve_survives(k, n, primes_up_to(sieve_bound));
}

bool sieve_survives(const Natural& k, unsigned n, const std::vector<std::uint32_t>& primes) {
    const Natural N = (k << n) + 1;
    if (N <= std::numeric_limits<std::uint64_t>::max()) {
        const std::uint64_t v = N.template convert_to<std::uint64_t>();
        for (std::uint32_t p : primes) {
            if (p == 2) continue;
            if (v % p == 0 && v != p) return false;
        }
        return true;
    }
    for (std::uint32_t p : primes) {
        if (p == 2) continue;
        if (N % p == 0 && N != p) return false;
    }
    return true;
}

int proth_outcome(std::uint64_t k, unsigned n, std::uint32_t witness_bound,
                  std::uint32_t* witness_out) {
    const std::uint64_t N = (k << n) + 1;
    for (std::uint32_t p : primes_up_to(witness_bound)) {
        if (jacobi_by_factorization(p, N) == -1) {
            if (witness_out) *witness_out = p;
            return powmod(p, (N - 1) / 2, N) == N - 1 ? 0 : 1;
        }
    }
    if (witness_out) *witness_out = 0;
    return 2;
}

std::vector<SimRung> build_ladder_sim(std::uint64_t start, std::uint64_t end, unsigned n,
                                      std::uint64_t delta, std::uint32_t witness_bound,
                                      std::uint32_t sieve_bound) {
    std::vector<SimRung> rungs;
    rungs.push_back({false, 0, 0, start});
    std::uint64_t cur = start;
    while (cur + delta < end) {
        std::uint64_t k1 = (cur + delta - 2) >> n;
        if (n < 63 && k1 >= (std::uint64_t(1) << n)) k1 = (std::uint64_t(1) << n) - 1;
        if (k1 >= 1 && k1 % 2 == 0) --k1;
        bool found = false;
        std::uint64_t k = k1;
        while (k >= 1 && (k << n) + 1 > cur) {
            if (sieve_survives(Natural(k), n, sieve_bound)) {
                std::uint32_t w = 0;
                if (proth_outcome(k, n, witness_bound, &w) == 0) {
                    rungs.push_back({true, k, w, (k << n) + 1});
                    cur = (k << n) + 1;
                    found = true;
                    break;
                }
            }
            if (k <= 2) break;
            k -= 2;
        }
        if (!found) {
            std::uint64_t q = prev_prime_u64(cur + delta);
            if (q <= cur) throw std::runtime_error("sim: gap exceeded");
            rungs.push_back({false, 0, 0, q});
            cur = q;
        }
    }
    return rungs;
}

} // namespace oracle
