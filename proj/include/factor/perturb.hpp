#pragma once

#include <cstdint>
#include <vector>

#include "factor/factor_matrix.hpp"
#include "factor/graph.hpp"

namespace fct {

// Sentinel for "no such perturbed factor"; safe to add small offsets without
// wrapping.
inline constexpr int64_t weight_neg_inf = INT64_MIN / 4;

struct perturb_result {
    bool ok = false;
    // Sampling trouble (degrees inconsistent, all points singular); a fresh
    // seed may succeed. ok=false without unlucky means the determinant is
    // identically zero: the graph is not critical as required.
    bool unlucky = false;
    std::vector<int64_t> w;  // per input vertex; weight_neg_inf when absent
    int64_t base = 0;        // weight of the maximum factor of the augmented graph
};

// Prime large enough for the interpolation degree and the error bound:
// random in [max(2^31, phi^3, D+2), twice that].
field choose_field(long phi, long degree_bound, rng& r);

// w(F_v) for every v: the maximum weight of an f_v-factor of g_plus, read off
// the adjoint column of the once-augmented graph (new vertex t joined to all
// by weight-0 edges, f(t)=1).
perturb_result lower_weights(const multigraph& g_plus, const degree_constraint& f,
                             const field& fld, rng& r);

// w(F^v) analogously, via the pendant construction: every u gains a pendant
// t_u (weight-0 edge), a hub t joins all pendants, and f is raised by one on
// the original vertices.
perturb_result upper_weights(const multigraph& g_plus, const degree_constraint& f,
                             const field& fld, rng& r);

// Bipartite w(F_v) for v on side 1 of g. Internally closes g with s on side 1
// (weight-0 edges to all of side 0) and augments with t on side 0 joined to
// the original side-1 vertices. Side-0 entries of the result stay at the
// sentinel.
perturb_result bipartite_lower_weights(const multigraph& g, const degree_constraint& f,
                                       const std::vector<int>& side, const field& fld,
                                       rng& r);

}  // namespace fct
