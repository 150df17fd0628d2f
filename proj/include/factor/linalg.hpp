#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "factor/modp.hpp"

namespace fct {

struct matrix {
    size_t rows = 0, cols = 0;
    std::vector<uint64_t> a;  // row-major

    matrix() = default;
    matrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}

    uint64_t& at(size_t r, size_t c) { return a[r * cols + c]; }
    uint64_t at(size_t r, size_t c) const { return a[r * cols + c]; }

    static matrix identity(size_t n) {
        matrix m(n, n);
        for (size_t i = 0; i < n; i++) m.at(i, i) = 1;
        return m;
    }
    bool operator==(const matrix& o) const = default;
};

// Toggle for the OpenMP paths. Serial reference entry points below ignore it.
void set_parallel_kernels(bool enabled);
bool parallel_kernels_enabled();

matrix mat_mul(const field& f, const matrix& x, const matrix& y);
matrix mat_add(const field& f, const matrix& x, const matrix& y);
matrix mat_sub(const field& f, const matrix& x, const matrix& y);
matrix mat_transpose(const matrix& x);

uint64_t det(const field& f, const matrix& m);
uint64_t det_serial(const field& f, const matrix& m);

std::optional<matrix> invert(const field& f, const matrix& m);
std::optional<matrix> invert_serial(const field& f, const matrix& m);

// inv must be A^{-1}; returns (A + U V^T)^{-1}, or nullopt when
// I_k + V^T A^{-1} U is singular (equivalently A + U V^T singular).
std::optional<matrix> smw_update(const field& f, const matrix& inv, const matrix& U, const matrix& V);

// The k x k capacitance matrix I_k + V^T inv U of the same update.
matrix smw_capacitance(const field& f, const matrix& inv, const matrix& U, const matrix& V);

// Polynomial matrix presented by evaluation. degree_bound D must satisfy
// deg det <= D and deg of every adjugate entry <= D.
struct poly_eval {
    std::function<matrix(uint64_t)> at;
    long degree_bound = 0;
};

// Monomial coefficients of the degree-<=D polynomial through the D+1 points.
std::vector<uint64_t> interpolate(const field& f, const std::vector<uint64_t>& xs,
                                  const std::vector<uint64_t>& ys);

long poly_degree(const std::vector<uint64_t>& coeffs);

// Degree of det over z, or -1 for the identically zero determinant.
long poly_det_degree(const field& f, const poly_eval& pe, rng& r);

struct adjoint_degrees {
    bool ok = false;  // false: every sampled point was singular
    std::vector<long> deg;  // per row, -1 for zero polynomial
};

// Degrees of adj(B(z))_{r,col} for every row r, via det(B) B^{-1} e_col at
// interpolation points. Singular points are replaced with fresh ones.
adjoint_degrees poly_adjoint_column_degrees(const field& f, const poly_eval& pe, size_t col, rng& r);

}  // namespace fct
