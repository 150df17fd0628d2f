#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factor/factor_solve.hpp"
#include "factor/perturb.hpp"

namespace fct {

// Blossom tree of a b-critical graph, built by shrinking tight edge sets in
// descending zeta order, where zeta(uv copy) = w(F_u) + w(F_v) + w(uv) and
// F_x is a maximum b_x-matching (b lowered by one at x). Leaves are the
// vertices; each internal node records the copies contracted at its level.
struct bmatch_node {
    int vertex = -1;  // leaf: vertex id; internal: -1
    int parent = -1;
    std::vector<int> children;                // node ids, creation order
    std::vector<std::pair<int, int>> star;    // copies tight at this level
    int64_t zeta = 0;
};

struct bmatch_tree {
    bool ok = false;
    std::string error;
    std::vector<bmatch_node> nodes;  // ids 0..n-1 are the leaves
    int root = -1;
    std::vector<int64_t> y;  // per vertex, -w(F_v)
    std::vector<int64_t> z;  // per node; root carries its own zeta, others the
                             // drop to the parent level, leaves 0
};

// lower[v] = w(F_v) as produced by lower_weights on the critical graph.
// Fails (ok=false) when shrinking stalls before a single root remains, which
// means the graph is disconnected or the weights are not a critical family.
bmatch_tree build_bmatch_tree(const multigraph& g, const std::vector<int>& b,
                              const std::vector<int64_t>& lower);

// Leaf vertex ids under a node, ascending.
std::vector<int> blossom_vertices(const bmatch_tree& t, int node);

// Sum of z over the nodes whose vertex set contains both endpoints; the
// blossom part of the dual value of a copy.
int64_t bmatch_zsum(const bmatch_tree& t, int u, int v);

// Maximum b_v-matching read out of the tree: solve a degree-exact factor
// problem among each node's star copies, entering every blossom child at the
// endpoint its matched edge dictates. nullopt when an inner solve fails;
// retry with fresh randomness at the caller.
std::optional<edge_subset> b_match(const bmatch_tree& t, const multigraph& g,
                                   const std::vector<int>& b, int node, int v,
                                   const field& fld, rng& r);

// Las Vegas certificate: m is a maximum b_v-matching iff degrees are exact,
// every copy is dominated (w <= y(u) + y(v) + zsum), matched copies are
// tight, every blossom A holds (b(V(A)) - 1) / 2 matched copies inside, and
// z >= 0 off the root.
bool verify_bmatch(const bmatch_tree& t, const multigraph& g, const std::vector<int>& b,
                   const edge_subset& m, int v, std::string* why = nullptr);

// Apex closure for plain maximum b-matching input: new vertex s with b(s)=1
// joined to every live vertex by a 0-edge, a 0-loop on every live vertex, and
// every copy replicated to its usable multiplicity (min(b(u), b(v)), or
// floor(b(v)/2) for loops). A maximum b_s-matching of the closure restricted
// to the original copies is the answer.
struct bmatch_instance {
    multigraph g;
    std::vector<int> b;  // b(s) = 1 appended
    int s = 0;
    std::vector<int> vmap;                  // input vertex -> closure vertex, -1 dropped
    std::vector<std::pair<int, int>> from;  // per record: source (edge, copy), (-1,-1) added
};

bmatch_instance bmatch_closure(const multigraph& g, const std::vector<int>& b);

struct bmatch_result {
    bool found = false;
    bool gave_up = false;
    std::vector<std::vector<int>> use;  // per input edge, per copy: times used
    int64_t weight = 0;
    int retries = 0;
    bmatch_tree tree;       // of the closure graph
    edge_subset matching;   // on the closure graph, closure copies included
};

// Builds the closure, derives lower weights, shrinks, extracts at s and
// verifies. found=false without gave_up: no b-matching with the required
// degrees exists (one-sided, per has_factor).
bmatch_result max_bmatch(const multigraph& g, const std::vector<int>& b, rng& r);

}  // namespace fct
