#pragma once

// Tiny symbolic polynomial helpers for test oracles: dense coefficient
// vectors over Z_p with cofactor-expansion determinants. Deliberately
// independent from the library's interpolation path.

#include <vector>

#include "factor/modp.hpp"

namespace testpoly {

using poly = std::vector<uint64_t>;  // coeff[i] multiplies z^i; empty = zero

inline poly trim(poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

inline long degree(const poly& p) { return (long)trim(p).size() - 1; }

inline poly add(const fct::field& F, const poly& a, const poly& b) {
    poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); i++) r[i] = a[i];
    for (size_t i = 0; i < b.size(); i++) r[i] = F.add(r[i], b[i]);
    return trim(r);
}

inline poly sub(const fct::field& F, const poly& a, const poly& b) {
    poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); i++) r[i] = a[i];
    for (size_t i = 0; i < b.size(); i++) r[i] = F.sub(r[i], b[i]);
    return trim(r);
}

inline poly mul(const fct::field& F, const poly& a, const poly& b) {
    if (a.empty() || b.empty()) return {};
    poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); i++)
        for (size_t j = 0; j < b.size(); j++)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    return trim(r);
}

inline uint64_t eval(const fct::field& F, const poly& p, uint64_t x) {
    uint64_t acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = F.add(F.mul(acc, x), p[i]);
    return acc;
}

using sym_matrix = std::vector<std::vector<poly>>;

inline sym_matrix minor_of(const sym_matrix& m, size_t dr, size_t dc) {
    sym_matrix r;
    for (size_t i = 0; i < m.size(); i++) {
        if (i == dr) continue;
        std::vector<poly> row;
        for (size_t j = 0; j < m.size(); j++)
            if (j != dc) row.push_back(m[i][j]);
        r.push_back(std::move(row));
    }
    return r;
}

inline poly sym_det(const fct::field& F, const sym_matrix& m) {
    size_t n = m.size();
    if (n == 0) return {1};
    if (n == 1) return m[0][0];
    poly acc;
    for (size_t i = 0; i < n; i++) {
        poly term = mul(F, m[i][0], sym_det(F, minor_of(m, i, 0)));
        acc = (i % 2 == 0) ? add(F, acc, term) : sub(F, acc, term);
    }
    return acc;
}

// adj(A)[a][b] = (-1)^{a+b} det(A with row b and column a removed)
inline poly sym_adj_entry(const fct::field& F, const sym_matrix& m, size_t a, size_t b) {
    poly d = sym_det(F, minor_of(m, b, a));
    if ((a + b) % 2 == 1) {
        poly z;
        return sub(F, z, d);
    }
    return d;
}

}  // namespace testpoly
