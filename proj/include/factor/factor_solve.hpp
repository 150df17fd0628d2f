#pragma once

#include <vector>

#include "factor/factor_matrix.hpp"
#include "factor/graph.hpp"

namespace fct {

// A solve restarts with fresh randomness after an internal inconsistency;
// this many failures in a row mean the run itself is suspect.
inline constexpr int solve_max_retries = 5;

struct factor_result {
    bool found = false;
    // Retries exhausted: the answer is unknown rather than "no factor".
    bool gave_up = false;
    edge_subset factor;
    int retries = 0;
};

// One-sided: false answers err with probability <= (phi/p)^trials.
bool has_factor(const multigraph& g, const degree_constraint& f, const field& fld,
                rng& r, int trials = 2);

// Pivots on nonzero inverse entries, one per (vertex, slot) of side 0,
// Schur-eliminating as it goes. Scans every live row of every neighbor for a
// pivot, not just the matching slot.
factor_result find_bipartite_factor(const multigraph& g, const degree_constraint& f,
                                    const std::vector<int>& side, const field& fld, rng& r);

// Removes copies edge by edge, binary-searching the removable count through
// descending powers of two; each accepted batch is one low-rank inverse update.
// What survives is the factor.
factor_result find_general_factor(const multigraph& g, const degree_constraint& f,
                                  const field& fld, rng& r);

}  // namespace fct
