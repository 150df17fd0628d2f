#include "factor/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <set>

namespace fct {

static bool g_parallel = true;

void set_parallel_kernels(bool enabled) { g_parallel = enabled; }
bool parallel_kernels_enabled() { return g_parallel; }

matrix mat_mul(const field& f, const matrix& x, const matrix& y) {
    assert(x.cols == y.rows);
    matrix out(x.rows, y.cols);
    for (size_t i = 0; i < x.rows; i++) {
        for (size_t k = 0; k < x.cols; k++) {
            uint64_t xv = x.at(i, k);
            if (!xv) continue;
            for (size_t j = 0; j < y.cols; j++) {
                out.at(i, j) = f.add(out.at(i, j), f.mul(xv, y.at(k, j)));
            }
        }
    }
    return out;
}

matrix mat_add(const field& f, const matrix& x, const matrix& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    matrix out(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); i++) out.a[i] = f.add(x.a[i], y.a[i]);
    return out;
}

matrix mat_sub(const field& f, const matrix& x, const matrix& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    matrix out(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); i++) out.a[i] = f.sub(x.a[i], y.a[i]);
    return out;
}

matrix mat_transpose(const matrix& x) {
    matrix out(x.cols, x.rows);
    for (size_t i = 0; i < x.rows; i++)
        for (size_t j = 0; j < x.cols; j++) out.at(j, i) = x.at(i, j);
    return out;
}

// Gauss-Jordan with partial pivoting over Z_p. inv_out, when non-null,
// accumulates the inverse; returns det (0 on singular).
static uint64_t eliminate(const field& f, matrix m, matrix* inv_out, bool parallel) {
    assert(m.rows == m.cols);
    size_t n = m.rows;
    matrix inv = matrix::identity(n);
    uint64_t d = 1;
    for (size_t col = 0; col < n; col++) {
        size_t piv = col;
        while (piv < n && m.at(piv, col) == 0) piv++;
        if (piv == n) {
            if (inv_out) *inv_out = matrix();
            return 0;
        }
        if (piv != col) {
            for (size_t j = 0; j < n; j++) {
                std::swap(m.at(piv, j), m.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
            d = f.neg(d);
        }
        uint64_t pv = m.at(col, col);
        d = f.mul(d, pv);
        uint64_t pinv = f.inv(pv);
        for (size_t j = 0; j < n; j++) {
            m.at(col, j) = f.mul(m.at(col, j), pinv);
            inv.at(col, j) = f.mul(inv.at(col, j), pinv);
        }
        uint64_t* mrow = &m.a[col * n];
        uint64_t* irow = &inv.a[col * n];
        bool par = parallel && n >= 64;
#pragma omp parallel for schedule(static) if (par)
        for (size_t r = 0; r < n; r++) {
            if (r == col) continue;
            uint64_t factor = m.at(r, col);
            if (!factor) continue;
            uint64_t* mr = &m.a[r * n];
            uint64_t* ir = &inv.a[r * n];
            for (size_t j = 0; j < n; j++) {
                mr[j] = f.sub(mr[j], f.mul(factor, mrow[j]));
                ir[j] = f.sub(ir[j], f.mul(factor, irow[j]));
            }
        }
    }
    if (inv_out) *inv_out = std::move(inv);
    return d;
}

uint64_t det(const field& f, const matrix& m) { return eliminate(f, m, nullptr, g_parallel); }
uint64_t det_serial(const field& f, const matrix& m) { return eliminate(f, m, nullptr, false); }

std::optional<matrix> invert(const field& f, const matrix& m) {
    matrix inv;
    if (eliminate(f, m, &inv, g_parallel) == 0) return std::nullopt;
    return inv;
}

std::optional<matrix> invert_serial(const field& f, const matrix& m) {
    matrix inv;
    if (eliminate(f, m, &inv, false) == 0) return std::nullopt;
    return inv;
}

matrix smw_capacitance(const field& f, const matrix& inv, const matrix& U, const matrix& V) {
    assert(U.rows == inv.rows && V.rows == inv.rows && U.cols == V.cols);
    matrix t = mat_mul(f, inv, U);               // n x k
    matrix s = mat_mul(f, mat_transpose(V), t);  // k x k
    for (size_t i = 0; i < s.rows; i++) s.at(i, i) = f.add(s.at(i, i), 1);
    return s;
}

std::optional<matrix> smw_update(const field& f, const matrix& inv, const matrix& U, const matrix& V) {
    size_t k = U.cols;
    if (k == 0) return inv;
    matrix aiU = mat_mul(f, inv, U);  // n x k
    matrix s = mat_mul(f, mat_transpose(V), aiU);
    for (size_t i = 0; i < k; i++) s.at(i, i) = f.add(s.at(i, i), 1);
    auto sinv = invert(f, s);
    if (!sinv) return std::nullopt;
    matrix vtAi = mat_mul(f, mat_transpose(V), inv);  // k x n
    matrix corr = mat_mul(f, mat_mul(f, aiU, *sinv), vtAi);
    return mat_sub(f, inv, corr);
}

// Newton divided differences, then expansion to monomial coefficients.
std::vector<uint64_t> interpolate(const field& f, const std::vector<uint64_t>& xs,
                                  const std::vector<uint64_t>& ys) {
    size_t n = xs.size();
    assert(ys.size() == n && n > 0);
    std::vector<uint64_t> dd(ys);
    // dd[i] becomes the coefficient of prod_{j<i} (x - xs[j])
    for (size_t level = 1; level < n; level++) {
        for (size_t i = n - 1; i >= level; i--) {
            uint64_t num = f.sub(dd[i], dd[i - 1]);
            uint64_t den = f.sub(xs[i], xs[i - level]);
            dd[i] = f.mul(num, f.inv(den));
            if (i == level) break;
        }
    }
    std::vector<uint64_t> coeff(n, 0);
    // Horner-style: poly = dd[n-1]; poly = poly*(x - xs[i]) + dd[i]
    coeff[0] = dd[n - 1];
    size_t deg = 0;
    for (size_t i = n - 1; i-- > 0;) {
        // multiply by (x - xs[i])
        for (size_t j = deg + 2; j-- > 1;) {
            coeff[j] = f.sub(coeff[j - 1], f.mul(coeff[j], xs[i]));
        }
        coeff[0] = f.mul(coeff[0], f.neg(xs[i]));
        deg++;
        coeff[0] = f.add(coeff[0], dd[i]);
    }
    return coeff;
}

long poly_degree(const std::vector<uint64_t>& coeffs) {
    for (size_t i = coeffs.size(); i-- > 0;) {
        if (coeffs[i] != 0) return (long)i;
    }
    return -1;
}

static std::vector<uint64_t> distinct_points(const field& f, size_t count, rng& r) {
    std::set<uint64_t> seen;
    std::vector<uint64_t> pts;
    while (pts.size() < count) {
        uint64_t z = r.below(f.p);
        if (seen.insert(z).second) pts.push_back(z);
    }
    return pts;
}

long poly_det_degree(const field& f, const poly_eval& pe, rng& r) {
    size_t npts = (size_t)pe.degree_bound + 1;
    assert(npts < f.p);
    std::vector<uint64_t> xs = distinct_points(f, npts, r);
    std::vector<uint64_t> ys(npts);
    bool par = g_parallel && npts > 1;
#pragma omp parallel for schedule(dynamic) if (par)
    for (size_t i = 0; i < npts; i++) {
        ys[i] = eliminate(f, pe.at(xs[i]), nullptr, false);
    }
    return poly_degree(interpolate(f, xs, ys));
}

adjoint_degrees poly_adjoint_column_degrees(const field& f, const poly_eval& pe, size_t col, rng& r) {
    size_t npts = (size_t)pe.degree_bound + 1;
    assert(npts < f.p);
    std::vector<uint64_t> xs = distinct_points(f, npts, r);
    size_t n = 0;
    std::vector<std::vector<uint64_t>> cols(npts);  // adj column per point
    std::vector<char> bad(npts, 0);
    std::atomic<long> failures{0};
    bool par = g_parallel && npts > 1;
#pragma omp parallel for schedule(dynamic) if (par)
    for (size_t i = 0; i < npts; i++) {
        matrix b = pe.at(xs[i]);
        matrix inv;
        uint64_t d = eliminate(f, b, &inv, false);
        if (d == 0) {
            bad[i] = 1;
            failures++;
            continue;
        }
        std::vector<uint64_t> v(inv.rows);
        for (size_t rr = 0; rr < inv.rows; rr++) v[rr] = f.mul(d, inv.at(rr, col));
        cols[i] = std::move(v);
    }
    // replace singular points sequentially with fresh ones
    long budget = 3 * (long)pe.degree_bound + 3;
    std::set<uint64_t> used(xs.begin(), xs.end());
    for (size_t i = 0; i < npts; i++) {
        while (bad[i]) {
            if (failures > budget) return {};
            uint64_t z;
            do {
                z = r.below(f.p);
            } while (!used.insert(z).second);
            matrix b = pe.at(z);
            matrix inv;
            uint64_t d = eliminate(f, b, &inv, false);
            if (d == 0) {
                failures++;
                continue;
            }
            xs[i] = z;
            std::vector<uint64_t> v(inv.rows);
            for (size_t rr = 0; rr < inv.rows; rr++) v[rr] = f.mul(d, inv.at(rr, col));
            cols[i] = std::move(v);
            bad[i] = 0;
        }
        n = cols[i].size();
    }
    adjoint_degrees out;
    out.ok = true;
    out.deg.resize(n);
    std::vector<uint64_t> ys(npts);
    for (size_t row = 0; row < n; row++) {
        for (size_t i = 0; i < npts; i++) ys[i] = cols[i][row];
        out.deg[row] = poly_degree(interpolate(f, xs, ys));
    }
    return out;
}

}  // namespace fct
