#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "prothladder/checker.hpp"
#include "prothladder/proth.hpp"

using prothladder::Natural;
using namespace prothladder::proth;

TEST_CASE("jacobi spot values") {
    REQUIRE(jacobi(Natural(1), Natural(9)) == 1);
    REQUIRE(jacobi(Natural(2), Natural(13)) == -1);
    REQUIRE(jacobi(Natural(3), Natural(9)) == 0);
    REQUIRE(jacobi(Natural(2), Natural(9)) == 1);
    REQUIRE(jacobi(Natural(0), Natural(9)) == 0);
    REQUIRE(jacobi(Natural(5), Natural(1)) == 1);
    REQUIRE(jacobi(Natural(22), Natural(13)) == jacobi(Natural(9), Natural(13)));
}

TEST_CASE("jacobi rejects even or zero modulus") {
    REQUIRE_THROWS_AS(jacobi(Natural(3), Natural(8)), prothladder::PreconditionError);
    REQUIRE_THROWS_AS(jacobi(Natural(3), Natural(0)), prothladder::PreconditionError);
}

TEST_CASE("jacobi matches Euler criterion on odd primes") {
    for (std::uint32_t p : oracle::primes_up_to(300)) {
        if (p == 2) continue;
        for (std::uint64_t a = 1; a < p; ++a) {
            int j = jacobi(Natural(a), Natural(p));
            REQUIRE(j == oracle::legendre(a, p));
            Natural e = mod_pow(Natural(a), Natural((p - 1) / 2), Natural(p));
            REQUIRE(Natural(j == -1 ? p - 1 : 1) == e);
        }
    }
}

TEST_CASE("jacobi matches the factor-multiplicativity oracle") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t n = (rng() % 99999) * 2 + 3;
        std::uint64_t a = rng() % 1000000;
        REQUIRE(jacobi(Natural(a), Natural(n)) == oracle::jacobi_by_factorization(a, n));
    }
}

TEST_CASE("jacobi is multiplicative in the numerator") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 2000; ++i) {
        Natural n = Natural(rng() % 1000000) * 2 + 3;
        Natural a = Natural(rng() % 1000000);
        Natural b = Natural(rng() % 1000000);
        REQUIRE(jacobi(a * b, n) == jacobi(a, n) * jacobi(b, n));
    }
}

TEST_CASE("mod_pow basics") {
    REQUIRE(mod_pow(Natural(7), Natural(0), Natural(5)) == 1);
    REQUIRE(mod_pow(Natural(0), Natural(0), Natural(2)) == 1);
    REQUIRE(mod_pow(Natural(3), Natural(4), Natural(5)) == 1);
    REQUIRE(mod_pow(Natural(3), Natural(20), Natural(41)) == 40);
    REQUIRE(mod_pow(Natural(10), Natural(3), Natural(7)) == 6);
    REQUIRE_THROWS_AS(mod_pow(Natural(3), Natural(4), Natural(1)), prothladder::PreconditionError);
    REQUIRE_THROWS_AS(mod_pow(Natural(3), Natural(4), Natural(0)), prothladder::PreconditionError);
}

TEST_CASE("mod_pow agrees with the 64-bit route and the checker's scan") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t b = rng() % 1000000007ull;
        std::uint64_t e = rng() % 1000000007ull;
        std::uint64_t m = 2 + rng() % 1000000007ull;
        Natural ltr = mod_pow(Natural(b), Natural(e), Natural(m));
        REQUIRE(ltr == Natural(prothladder::powmod_u64(b, e, m)));
        REQUIRE(ltr == prothladder::checker::mod_pow_rtl(Natural(b), Natural(e), Natural(m)));
    }
}

TEST_CASE("witness prime tables") {
    auto t29 = witness_primes(29);
    REQUIRE(t29 == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    REQUIRE(witness_primes(2) == std::vector<std::uint32_t>{2});
    REQUIRE(witness_primes(10) == std::vector<std::uint32_t>{2, 3, 5, 7});
}

TEST_CASE("ProthForm normalization and eligibility") {
    ProthForm f = ProthForm::normalized(Natural(4), 2);
    REQUIRE(f.k == 1);
    REQUIRE(f.n == 4);
    REQUIRE(f.value() == 17);
    REQUIRE(ProthForm(Natural(3), 2).value() == 13);
    REQUIRE(ProthForm(Natural(3), 2).eligible());
    REQUIRE_FALSE(ProthForm(Natural(4), 2).eligible());
    REQUIRE_THROWS_AS(ProthForm(Natural(0), 2), prothladder::PreconditionError);
}

TEST_CASE("proth_test spot outcomes") {
    ProthResult r = proth_test(ProthForm(Natural(3), 2), 29); // N = 13
    REQUIRE(r.outcome == ProthOutcome::prime);
    REQUIRE(r.witness == 2);

    r = proth_test(ProthForm(Natural(1), 3), 29); // N = 9, a square
    REQUIRE(r.outcome == ProthOutcome::no_witness);

    r = proth_test(ProthForm(Natural(7), 3), 29); // N = 57 = 3 * 19
    REQUIRE(r.outcome == ProthOutcome::composite);
    REQUIRE(r.witness == 5);

    r = proth_test(ProthForm(Natural(1), 1), 29); // N = 3
    REQUIRE(r.outcome == ProthOutcome::prime);
    REQUIRE(r.witness == 2);
}

TEST_CASE("proth_test rejects broken preconditions") {
    REQUIRE_THROWS_AS(proth_test(ProthForm(Natural(4), 2), 29), prothladder::PreconditionError);
    REQUIRE_THROWS_AS(proth_test(ProthForm(Natural(5), 2), 29), prothladder::PreconditionError);
}

TEST_CASE("proth_test sound and complete against trial division below 1e5") {
    std::uint64_t nowitness_primes = 0, nowitness_composites = 0;
    for (unsigned n = 1; n < 17; ++n) {
        for (std::uint64_t k = 1; k < (1ull << n) && (k << n) + 1 < 100000; k += 2) {
            const std::uint64_t N = (k << n) + 1;
            const bool actual = oracle::is_prime_u64(N);
            ProthResult r = proth_test(ProthForm(Natural(k), n), 29);
            switch (r.outcome) {
            case ProthOutcome::prime:
                REQUIRE(actual);
                break;
            case ProthOutcome::composite:
                REQUIRE_FALSE(actual);
                break;
            case ProthOutcome::no_witness:
                (actual ? nowitness_primes : nowitness_composites) += 1;
                break;
            }
            // Witness order: no smaller prime in the table is a non-residue.
            if (r.outcome != ProthOutcome::no_witness) {
                for (std::uint32_t p : witness_primes(29)) {
                    if (p == r.witness) break;
                    REQUIRE(jacobi(Natural(p), Natural(N)) != -1);
                }
            }
        }
    }
    REQUIRE(nowitness_primes == 0); // the lone case below 1e6 is N = 979969
    REQUIRE(nowitness_composites > 0);
}

TEST_CASE("verify_certificate re-checks stored claims") {
    REQUIRE(verify_certificate(ProthForm(Natural(3), 2), Natural(2)));
    REQUIRE_FALSE(verify_certificate(ProthForm(Natural(3), 2), Natural(3))); // (3/13) = +1
    REQUIRE_FALSE(verify_certificate(ProthForm(Natural(4), 2), Natural(2))); // 4 !< 2^2
    REQUIRE_FALSE(verify_certificate(ProthForm(Natural(7), 3), Natural(5))); // 57 composite
    REQUIRE_FALSE(verify_certificate(ProthForm(Natural(1), 3), Natural(2))); // no witness for 9
}

TEST_CASE("verify_certificate agrees across exponentiation strategies") {
    std::mt19937_64 rng(19);
    auto rtl = [](const Natural& b, const Natural& e, const Natural& m) {
        return prothladder::checker::mod_pow_rtl(b, e, m);
    };
    for (int i = 0; i < 500; ++i) {
        unsigned n = 2 + rng() % 12;
        Natural k = Natural((rng() % (1ull << (n - 1))) * 2 + 1);
        Natural a = Natural(2 + rng() % 28);
        ProthForm f(k, n);
        REQUIRE(verify_certificate(f, a) == verify_certificate_with(f, a, rtl));
    }
}
