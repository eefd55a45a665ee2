#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "prothladder/primality.hpp"

using prothladder::Natural;

TEST_CASE("64-bit policy agrees with trial division exhaustively") {
    for (std::uint64_t n = 0; n < 200000; ++n)
        REQUIRE(prothladder::is_prime_u64(n) == oracle::is_prime_u64(n));
}

TEST_CASE("policy on Natural agrees with trial division") {
    for (std::uint64_t n = 0; n < 50000; ++n)
        REQUIRE(prothladder::is_prime(Natural(n)) == oracle::is_prime_u64(n));
}

TEST_CASE("known primes and pseudoprime traps") {
    REQUIRE(prothladder::is_prime((Natural(1) << 61) - 1)); // Mersenne M61
    REQUIRE_FALSE(prothladder::is_prime(Natural(561)));     // Carmichael 3*11*17
    REQUIRE_FALSE(prothladder::is_prime(Natural(341)));     // 2-pseudoprime 11*31
    REQUIRE_FALSE(prothladder::is_prime(Natural(4)));
    REQUIRE(prothladder::is_prime(Natural(2)));
    REQUIRE(prothladder::is_prime(Natural(97)));
    REQUIRE_FALSE(prothladder::is_prime(Natural(1)));
    REQUIRE_FALSE(prothladder::is_prime(Natural(0)));
}

TEST_CASE("wide path: strong test plus Lucas above 64 bits") {
    const Natural m89 = (Natural(1) << 89) - 1;
    const Natural m107 = (Natural(1) << 107) - 1;
    const Natural m101 = (Natural(1) << 101) - 1;
    REQUIRE(prothladder::is_prime(m89));
    REQUIRE(prothladder::is_prime(m107));
    REQUIRE_FALSE(prothladder::is_prime(m101)); // M101 is composite
    REQUIRE_FALSE(prothladder::is_prime(m89 * m89));
    REQUIRE_FALSE(prothladder::is_prime(m89 * ((Natural(1) << 61) - 1)));
    REQUIRE_FALSE(prothladder::is_prime((Natural(1) << 89) + 1)); // divisible by 3
}

TEST_CASE("strong probable prime routes agree across widths") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t n = (rng() | 1) % 1000000000ull;
        if (n < 5) n += 5;
        if (n % 2 == 0) ++n;
        std::uint64_t base = 2 + rng() % 97;
        REQUIRE(prothladder::strong_probable_prime(Natural(n), Natural(base)) ==
                prothladder::strong_probable_prime_u64(n, base));
    }
}

TEST_CASE("perfect square detection") {
    REQUIRE(prothladder::is_perfect_square(Natural(0)));
    REQUIRE(prothladder::is_perfect_square(Natural(1)));
    REQUIRE(prothladder::is_perfect_square(Natural(144)));
    REQUIRE_FALSE(prothladder::is_perfect_square(Natural(145)));
    const Natural big = (Natural(1) << 61) - 1;
    REQUIRE(prothladder::is_perfect_square(big * big));
    REQUIRE_FALSE(prothladder::is_perfect_square(big * big + 2));
}
