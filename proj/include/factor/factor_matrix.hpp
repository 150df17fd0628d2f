#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "factor/graph.hpp"
#include "factor/linalg.hpp"
#include "factor/modp.hpp"

namespace fct {

// Row/column indices carry (vertex, slot) pairs with f(v) slots per vertex.
// An entry position (i,r),(j,c) may hold edge terms only when permissible:
// i < j with any slots, or i = j and r < floor(f(i)/2) <= ceil(f(i)/2) <= c < f(i).
// The mirrored position holds the negated term, making the matrix skew-symmetric.
bool permissible(int i, int r, int j, int c, const degree_constraint& f);

// Cached randomness for one edge copy. x spans xv's row slots, y spans yv's
// column slots starting at y_lo (nonzero only for loops, which occupy the
// floor(f/2) x ceil(f/2) corner of the diagonal block). zexp is the shifted
// weight; zero when the matrix is unweighted.
struct copy_update {
    int xv = 0, yv = 0;
    int y_lo = 0;
    std::vector<uint64_t> x, y;
    int64_t zexp = 0;
};

struct factor_matrix {
    bool bipartite = false;
    // Bipartite sides with unequal slot totals cannot host a factor; no matrix
    // is materialized and callers short-circuit to "no factor".
    bool degenerate = false;
    size_t order = 0;
    field fld{2};  // replaced by the builders
    int64_t weight_shift = 0;  // W added to every copy weight before exponentiation
    std::vector<int> row_base, col_base;  // vertex -> first row/col, -1 if none
    std::vector<std::vector<copy_update>> per_edge;  // aligned with g.edges

    int row(int v, int slot) const { return row_base[v] + slot; }
    int col(int v, int slot) const { return col_base[v] + slot; }

    matrix eval(uint64_t z) const;

    // U, V such that eval(z) + U V^T is the matrix with the listed
    // (edge, copy) pairs deleted. Rank <= 2 per copy (1 when bipartite).
    std::pair<matrix, matrix> removal_uv(const std::vector<std::pair<int, int>>& copies,
                                         uint64_t z) const;

    // 2 * W' * order with W' the largest shifted exponent; safe bound on the
    // degree of det and of every adjugate entry.
    long degree_bound() const;
    poly_eval poly() const;
};

factor_matrix build_general(const multigraph& g, const degree_constraint& f,
                            const field& fld, bool weighted, rng& r);

// side[v] in {0,1}; rows come from side 0, columns from side 1. Edges must
// cross sides (loops are never bipartite).
factor_matrix build_bipartite(const multigraph& g, const degree_constraint& f,
                              const std::vector<int>& side, const field& fld,
                              bool weighted, rng& r);

}  // namespace fct
