#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "factor/blossom.hpp"
#include "factor/oracle.hpp"

namespace fct {

// Generalized shortest-path tree node. Leaves are graph vertices; interior
// nodes are contracted cycles, except possibly a root whose survivors form a
// tree. children of a cycle node are stored in ring order with the base (the
// child holding the sink) first; ring[i] joins children[i] and children[i+1
// mod k]. For a tree root, ring[i] is the parent edge of children[i], with
// the sink child first carrying (-1,-1). exit is e(N): the edge every
// shortest path from inside leaves on; empty on the chain of nodes holding
// the global sink.
struct gsp_node {
    int vertex = -1;  // leaf: vertex id; interior: -1
    bool cycle = false;
    int parent = -1;
    std::vector<int> children;
    std::vector<std::pair<int, int>> ring;  // copies (edge, copy)
    int sink = -1;                          // t(N), a vertex
    std::pair<int, int> exit{-1, -1};       // e(N), (-1,-1) = absent
};

// Scan of an already-contracted graph whose edges are all tight. e0 gives the
// forced first path edge per vertex ((-1,-1) = free choice); the search tree
// grows from t, fundamental cycles of qualifying nontree edges contract into
// cycle nodes, and a surviving tree of u-vertices becomes the tree root.
struct gsp_scan {
    bool ok = false;
    std::string error;
    std::vector<gsp_node> nodes;  // 0..n-1 leaves
    int root = -1;
    bool tree_root = false;  // halted as a tree rather than one cycle
};

gsp_scan build_gsp_tree(const multigraph& g, const std::vector<std::pair<int, int>>& e0,
                        int t);

enum class sssp_backend { algebraic, oracle };

// Full structure for one sink: distances, the gsp-tree, and node duals z in
// the reported min convention (z <= 0 off the root). Edge references are
// copies of the stored input graph.
struct gsp_structure {
    bool ok = false;
    bool gave_up = false;
    std::string error;
    bool negative_cycle = false;
    std::vector<std::pair<int, int>> cycle_witness;  // closed walk, negative total
    multigraph g;
    int sink = -1;
    std::vector<gsp_node> nodes;  // 0..n-1 leaves
    int root = -1;
    std::vector<int64_t> dist;  // d(v)
    std::vector<int64_t> z;     // per node
    int retries = 0;
};

// Shortest vt-paths for every v at once. Internally: weights negated, a zero
// loop added per vertex, f == 2 with a doubled pendant edge hanging the true
// degree-1 sink, then the critical-graph machinery; the pendant is spliced
// back out of the reported tree. A negative cycle surfaces as a positive
// maximum f_sink-factor and is returned as a witness instead of a structure.
// backend picks how the perturbed factor weights are obtained.
gsp_structure sssp(const multigraph& g, int t, sssp_backend backend, rng& r);

// Leaf descendants of a node, ascending.
std::vector<int> gsp_vertices(const gsp_structure& s, int node);

// Ordered vt-path of copies realizing d(v); starts with e(v).
std::vector<std::pair<int, int>> expand_path(const gsp_structure& s, int v);

// Dual certificate check: tree shape, z signs, d(x)+d(y)+w(xy) >= sum of
// z over covering nodes for every copy and every implicit zero loop, with
// equality on ring edges, exit edges and the loops, plus path weights.
struct gsp_report {
    bool ok = false;
    std::vector<std::string> violations;
};

gsp_report validate_gsp(const gsp_structure& s, const multigraph& g);

// Edmonds-style split graph: each vertex doubled with a zero-weight base
// edge, nonnegative edges become four crossings of weight -w, each negative
// copy e=uv a two-vertex gadget u1e1, u2e1, e1e2, v1e2, v2e2 with -w(e) on
// the u-side pair. ht identifies t1 with t2, making every v-matching reach-
// able; shortest distances are -w of maximum v1-avoiding matchings there.
struct split_graph {
    bool ok = false;
    std::string error;  // too many negative copies: a negative cycle among them
    multigraph h;
    multigraph ht;
    int t = -1;               // unified vertex in ht
    std::vector<int> v1, v2;  // vertex ids in ht; v1[t] == v2[t] == t
    std::vector<int> h1, h2;  // vertex ids in h
};

split_graph build_split_graph(const multigraph& g, int t);

}  // namespace fct
