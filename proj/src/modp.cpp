#include "factor/modp.hpp"

#include <initializer_list>

namespace fct {

static uint64_t mulmod_u(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((unsigned __int128)a * b % m);
}

static uint64_t powmod_u(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u(r, a, m);
        a = mulmod_u(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all n < 3.3e24 with this base set.
bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, s++;
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod_u(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; i++) {
            x = mulmod_u(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

uint64_t random_prime(uint64_t lo, uint64_t hi, rng& r) {
    assert(lo <= hi && hi >= 3);
    for (int tries = 0; tries < 100000; tries++) {
        uint64_t c = lo + r.below(hi - lo + 1);
        c |= 1;
        if (c >= lo && c <= hi && is_prime(c)) return c;
    }
    // dense enough prime ranges make this unreachable in practice
    for (uint64_t c = lo | 1; c <= hi; c += 2) {
        if (is_prime(c)) return c;
    }
    assert(false && "no prime in range");
    return 0;
}

}  // namespace fct
