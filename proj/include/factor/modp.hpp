#pragma once

#include <cassert>
#include <cstdint>

namespace fct {

// Counter-based deterministic generator (splitmix64). One instance per
// solver run so results are reproducible from the seed alone.
struct rng {
    uint64_t state;

    explicit rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0
    uint64_t below(uint64_t n) {
        assert(n > 0);
        uint64_t mask = ~0ULL;
        if (n <= (1ULL << 63)) {
            uint64_t pow2 = 1;
            while (pow2 < n) pow2 <<= 1;
            mask = pow2 - 1;
        }
        for (;;) {
            uint64_t v = next() & mask;
            if (v < n) return v;
        }
    }

    // uniform in [lo, hi] inclusive
    int64_t range(int64_t lo, int64_t hi) {
        assert(lo <= hi);
        return lo + (int64_t)below((uint64_t)(hi - lo) + 1);
    }
};

bool is_prime(uint64_t n);

// random prime in [lo, hi]; asserts one exists in range
uint64_t random_prime(uint64_t lo, uint64_t hi, rng& r);

// Arithmetic mod a prime p. p may exceed 2^32, so products go through
// unsigned __int128.
struct field {
    uint64_t p;

    explicit field(uint64_t prime) : p(prime) {}

    uint64_t reduce_int(int64_t v) const {
        int64_t m = v % (int64_t)p;
        if (m < 0) m += (int64_t)p;
        return (uint64_t)m;
    }
    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= p ? s - p : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + p - b; }
    uint64_t neg(uint64_t a) const { return a == 0 ? 0 : p - a; }
    uint64_t mul(uint64_t a, uint64_t b) const {
        return (uint64_t)((unsigned __int128)a * b % p);
    }
    uint64_t pow(uint64_t a, uint64_t e) const {
        uint64_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    uint64_t inv(uint64_t a) const {
        assert(a != 0);
        return pow(a, p - 2);
    }
    uint64_t nonzero(rng& r) const { return 1 + r.below(p - 1); }
};

}  // namespace fct
