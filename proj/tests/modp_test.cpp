#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "factor/modp.hpp"

using namespace fct;

TEST_CASE("splitmix is deterministic and covers ranges") {
    rng a(42), b(42);
    for (int i = 0; i < 1000; i++) CHECK(a.next() == b.next());

    rng c(7);
    std::set<uint64_t> seen;
    for (int i = 0; i < 200; i++) {
        uint64_t v = c.below(10);
        CHECK(v < 10);
        seen.insert(v);
    }
    CHECK(seen.size() == 10);  // all residues hit over 200 draws

    rng d(9);
    for (int i = 0; i < 100; i++) {
        uint64_t v = d.range(5, 9);
        CHECK(v >= 5);
        CHECK(v <= 9);
    }
}

TEST_CASE("primality on known values") {
    CHECK(!is_prime(0));
    CHECK(!is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(!is_prime(4));
    CHECK(is_prime(2147483647ULL));            // 2^31 - 1
    CHECK(!is_prime(2147483647ULL * 3));
    CHECK(is_prime((1ULL << 61) - 1));         // Mersenne
    CHECK(!is_prime((1ULL << 61) - 3));
    CHECK(is_prime(4611686018427387847ULL));   // near 2^62
    // Carmichael numbers must not fool the test
    CHECK(!is_prime(561));
    CHECK(!is_prime(41041));
    CHECK(!is_prime(825265));
}

TEST_CASE("random_prime lands in range and is reproducible") {
    rng r1(123), r2(123);
    uint64_t lo = 1ULL << 31, hi = 1ULL << 32;
    uint64_t p = random_prime(lo, hi, r1);
    uint64_t q = random_prime(lo, hi, r2);
    CHECK(p == q);
    CHECK(p >= lo);
    CHECK(p <= hi);
    CHECK(is_prime(p));
}

TEST_CASE("field arithmetic") {
    field F(1000000007ULL);
    CHECK(F.add(1000000006ULL, 1) == 0);
    CHECK(F.sub(0, 1) == 1000000006ULL);
    CHECK(F.mul(999999999ULL, 999999999ULL) == F.pow(999999999ULL, 2));
    CHECK(F.neg(0) == 0);

    // inverses across a spread of values
    rng r(5);
    for (int i = 0; i < 200; i++) {
        uint64_t a = r.range(1, F.p - 1);
        CHECK(F.mul(a, F.inv(a)) == 1);
    }

    // reduce_int maps negatives to the right residue
    CHECK(F.reduce_int(-1) == 1000000006ULL);
    CHECK(F.reduce_int(-1000000007LL) == 0);
    CHECK(F.reduce_int(1000000008LL) == 1);

    // 62-bit prime: products must not overflow
    field G(4611686018427387847ULL);
    uint64_t big = G.p - 2;
    CHECK(G.mul(big, G.inv(big)) == 1);
    CHECK(G.pow(3, G.p - 1) == 1);  // Fermat
}

TEST_CASE("nonzero draw never returns zero") {
    field F(17);
    rng r(11);
    for (int i = 0; i < 300; i++) {
        uint64_t v = F.nonzero(r);
        CHECK(v != 0);
        CHECK(v < 17);
    }
}
