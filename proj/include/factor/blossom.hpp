#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factor/factor_solve.hpp"
#include "factor/perturb.hpp"

namespace fct {

// Per-copy shrink keys of a critical graph, from the two perturbation
// families: zeta_v = w(F_v) + w(F^v), zeta_low = w(F_u) + w(F_v) + w(uv),
// zeta_high = w(F^u) + w(F^v) - w(uv). The two copy values always sum to
// zeta_u + zeta_v; a violation can only come from sentinel weights, i.e. a
// graph that is not critical in both directions.
struct zeta_tables {
    bool ok = false;
    std::string error;
    std::vector<int64_t> zeta_v;
    std::vector<std::vector<int64_t>> zeta_low;   // [edge][copy]
    std::vector<std::vector<int64_t>> zeta_high;  // [edge][copy]
};

zeta_tables edge_zetas(const multigraph& g, const perturb_result& lo,
                       const perturb_result& hi);

// Weighted blossom forest. Leaves are the vertices; every internal node is a
// blossom found as a 2-edge-connected component (or a live loop singleton) at
// its zeta level, shrinking in descending order of min(zeta_low, zeta_high).
// When several maximal blossoms survive, an artificial root spans them and
// tree_edges holds the copies bridging them (a forest, else the weight family
// is corrupt). z = own zeta minus parent zeta; children of the artificial
// root may carry z = 0 when formed at the final level, all else is positive.
struct blossom_node {
    int vertex = -1;  // leaf: vertex id; internal: -1
    int parent = -1;
    std::vector<int> children;  // node ids, creation order
    int64_t zeta = 0;
};

struct blossom_forest {
    bool ok = false;
    std::string error;
    std::vector<blossom_node> nodes;  // ids 0..n-1 are the leaves
    int root = -1;
    bool root_artificial = false;
    std::vector<std::pair<int, int>> tree_edges;  // copies joining maximal blossoms
    std::vector<int64_t> y;  // per vertex, -w(F_v)
    std::vector<int64_t> z;  // per node; leaves 0
    // Filled by find_ib_sets: copy lies in I(B) for the blossoms B whose
    // vertex set contains the u (resp. v) endpoint and not the other.
    std::vector<std::vector<char>> iu, iv;
    bool ib_done = false;
};

// Shrink. Fails when a cross copy survives as part of a cycle, some vertex
// never enters a blossom, or the graph is empty; all symptoms of weights
// that are not a critical family.
blossom_forest find_vb_sets(const multigraph& g, const zeta_tables& zt,
                            const std::vector<int64_t>& lower);

// Leaf vertex ids under a node, ascending.
std::vector<int> forest_vertices(const blossom_forest& wf, int node);

// I-set membership per copy endpoint: decided the level the endpoint first
// enters a blossom, either directly from the zeta tables or by peeling leaves
// of the current shrunken forest with the parity rule
//   xy in I(B)  iff  f(V(B)) - 1 + |I(B) - xy| is odd.
// Returns false (wf.ok cleared) on a parity or forest violation.
bool find_ib_sets(const multigraph& g, const degree_constraint& f, const zeta_tables& zt,
                  blossom_forest& wf);

// Dual value of a copy: y(u) + y(v) plus the zeta of the smallest blossom
// containing both endpoints, replaced by the endpoint blossoms' zetas as the
// copy enters their I-sets. A copy is tight when its weight meets this,
// strictly underrated above it, dominated below.
int64_t hat_yz(const blossom_forest& wf, const multigraph& g, int e, int k);

// Maximum perturbation F_v (dir = -1) or F^v (dir = +1) read out of the
// forest: bridge copies by component parity, strictly underrated copies
// always, then per blossom top-down an exact-degree solve over the tight
// copies of its level, with contracted children replaced by small gadgets
// that meter boundary use against the I-sets. nullopt when an inner solve
// fails or the data is inconsistent; retry with fresh randomness upstream.
std::optional<edge_subset> extract_perturbation(const multigraph& g,
                                                const degree_constraint& f,
                                                const blossom_forest& wf, int v, int dir,
                                                const field& fld, rng& r);

// Las Vegas certificate: m is a maximum f_v (or f^v) factor iff degrees are
// exact, every copy in m is underrated and every copy outside is dominated,
// and m crosses every blossom boundary in exactly its I-set, give or take
// the single swap edge allowed when v lies outside the blossom.
bool verify_perturbation(const multigraph& g, const degree_constraint& f,
                         const blossom_forest& wf, const edge_subset& m, int v, int dir,
                         std::string* why = nullptr);

// Apex closure for plain maximum f-factor input: new vertex s joined to every
// live vertex by min(2, f(v)) parallel 0-edges, f(s) = 1, f=0 vertices
// dropped. No loops: degrees stay exact. The closure is critical both ways
// exactly when g has an f-factor, and F_s is that factor, s isolated.
struct ffactor_instance {
    multigraph g;
    degree_constraint f;  // f(s) = 1 appended
    int s = 0;
    std::vector<int> vmap;                  // input vertex -> closure vertex, -1 dropped
    std::vector<std::pair<int, int>> from;  // per record: source (edge, copy), (-1,-1) added
};

ffactor_instance ffactor_closure(const multigraph& g, const degree_constraint& f);

struct general_weighted_result {
    bool found = false;
    bool gave_up = false;
    edge_subset factor;  // on the input graph
    int64_t weight = 0;
    int retries = 0;
    blossom_forest forest;  // of the closure graph
    multigraph closure;
    degree_constraint closure_f;
    int s = -1;
    std::vector<int> vmap;
};

// Builds the closure, derives both perturbation families, shrinks, extracts
// F_s and verifies. found=false without gave_up: no f-factor exists
// (one-sided, per has_factor).
general_weighted_result max_weight_general_factor(const multigraph& g,
                                                  const degree_constraint& f, rng& r);

}  // namespace fct
