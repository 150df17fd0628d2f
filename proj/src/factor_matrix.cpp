#include "factor/factor_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace fct {

bool permissible(int i, int r, int j, int c, const degree_constraint& f) {
    if (r < 0 || r >= f(i) || c < 0 || c >= f(j)) throw std::out_of_range("permissible: slot out of range");
    if (i < j) return true;
    if (i > j) return false;
    return r < f(i) / 2 && c >= (f(i) + 1) / 2;
}

namespace {

// Shift making every copy weight nonnegative; recorded so that reported
// weights can drop the uniform gain of W per factor edge.
int64_t weight_bound(const multigraph& g) {
    int64_t w = 0;
    for (const edge& e : g.edges)
        for (int64_t x : e.weights) w = std::max(w, x < 0 ? -x : x);
    return w;
}

std::vector<uint64_t> draw(const field& fld, rng& r, size_t n) {
    std::vector<uint64_t> v(n);
    for (auto& x : v) x = fld.nonzero(r);
    return v;
}

}  // namespace

matrix factor_matrix::eval(uint64_t z) const {
    matrix m(order, order);
    for (const auto& copies : per_edge)
        for (const copy_update& cu : copies) {
            uint64_t zf = fld.pow(z % fld.p, (uint64_t)cu.zexp);
            for (size_t r = 0; r < cu.x.size(); r++)
                for (size_t c = 0; c < cu.y.size(); c++) {
                    uint64_t t = fld.mul(zf, fld.mul(cu.x[r], cu.y[c]));
                    size_t rr = (size_t)row(cu.xv, (int)r);
                    size_t cc = (size_t)col(cu.yv, cu.y_lo + (int)c);
                    m.at(rr, cc) = fld.add(m.at(rr, cc), t);
                    if (!bipartite) m.at(cc, rr) = fld.sub(m.at(cc, rr), t);
                }
        }
    return m;
}

std::pair<matrix, matrix> factor_matrix::removal_uv(
    const std::vector<std::pair<int, int>>& copies, uint64_t z) const {
    size_t k = copies.size() * (bipartite ? 1 : 2);
    matrix U(order, k), V(order, k);
    size_t col_at = 0;
    for (auto [e, c] : copies) {
        const copy_update& cu = per_edge.at(e).at(c);
        uint64_t zf = fld.pow(z % fld.p, (uint64_t)cu.zexp);
        // contribution of the copy is zf * (x~ y~^T - y~ x~^T) (no second term
        // when bipartite); removal appends columns realizing its negation.
        for (size_t r = 0; r < cu.x.size(); r++)
            U.at((size_t)row(cu.xv, (int)r), col_at) = fld.neg(fld.mul(zf, cu.x[r]));
        for (size_t c2 = 0; c2 < cu.y.size(); c2++)
            V.at((size_t)col(cu.yv, cu.y_lo + (int)c2), col_at) = cu.y[c2];
        col_at++;
        if (!bipartite) {
            for (size_t c2 = 0; c2 < cu.y.size(); c2++)
                U.at((size_t)col(cu.yv, cu.y_lo + (int)c2), col_at) = fld.mul(zf, cu.y[c2]);
            for (size_t r = 0; r < cu.x.size(); r++)
                V.at((size_t)row(cu.xv, (int)r), col_at) = cu.x[r];
            col_at++;
        }
    }
    return {U, V};
}

long factor_matrix::degree_bound() const {
    int64_t wmax = 0;
    for (const auto& copies : per_edge)
        for (const copy_update& cu : copies) wmax = std::max(wmax, cu.zexp);
    return (long)(2 * wmax * (int64_t)order);
}

poly_eval factor_matrix::poly() const {
    return poly_eval{[this](uint64_t z) { return eval(z); }, degree_bound()};
}

factor_matrix build_general(const multigraph& g, const degree_constraint& f,
                            const field& fld, bool weighted, rng& r) {
    factor_matrix fm;
    fm.bipartite = false;
    fm.fld = fld;
    fm.weight_shift = weighted ? weight_bound(g) : 0;
    fm.row_base.assign(g.n, -1);
    int at = 0;
    for (int v = 0; v < g.n; v++) {
        fm.row_base[v] = at;
        at += f(v);
    }
    fm.col_base = fm.row_base;
    fm.order = (size_t)at;
    fm.per_edge.resize(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        int i = std::min(ed.u, ed.v), j = std::max(ed.u, ed.v);
        size_t xs, ys;
        int y_lo;
        if (i == j) {
            xs = (size_t)(f(i) / 2);
            y_lo = (f(i) + 1) / 2;
            ys = (size_t)(f(i) - y_lo);
        } else {
            xs = (size_t)f(i);
            y_lo = 0;
            ys = (size_t)f(j);
        }
        for (int64_t w : ed.weights) {
            copy_update cu;
            cu.xv = i;
            cu.yv = j;
            cu.y_lo = y_lo;
            cu.zexp = weighted ? w + fm.weight_shift : 0;
            cu.x = draw(fld, r, xs);
            cu.y = draw(fld, r, ys);
            fm.per_edge[e].push_back(std::move(cu));
        }
    }
    return fm;
}

factor_matrix build_bipartite(const multigraph& g, const degree_constraint& f,
                              const std::vector<int>& side, const field& fld,
                              bool weighted, rng& r) {
    factor_matrix fm;
    fm.bipartite = true;
    fm.fld = fld;
    fm.weight_shift = weighted ? weight_bound(g) : 0;
    fm.row_base.assign(g.n, -1);
    fm.col_base.assign(g.n, -1);
    int rows = 0, cols = 0;
    for (int v = 0; v < g.n; v++) {
        if (side.at(v) == 0) {
            fm.row_base[v] = rows;
            rows += f(v);
        } else {
            fm.col_base[v] = cols;
            cols += f(v);
        }
    }
    if (rows != cols) {
        fm.degenerate = true;
        return fm;
    }
    fm.order = (size_t)rows;
    fm.per_edge.resize(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        if (ed.is_loop() || side[ed.u] == side[ed.v])
            throw std::invalid_argument("build_bipartite: edge inside one side");
        int i = side[ed.u] == 0 ? ed.u : ed.v;
        int j = ed.other(i);
        for (int64_t w : ed.weights) {
            copy_update cu;
            cu.xv = i;
            cu.yv = j;
            cu.y_lo = 0;
            cu.zexp = weighted ? w + fm.weight_shift : 0;
            cu.x = draw(fld, r, (size_t)f(i));
            cu.y = draw(fld, r, (size_t)f(j));
            fm.per_edge[e].push_back(std::move(cu));
        }
    }
    return fm;
}

}  // namespace fct
