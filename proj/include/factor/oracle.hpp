#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "factor/graph.hpp"

namespace fct {

// Brute-force reference solvers. Everything here refuses instances beyond
// the budget instead of running unbounded.
struct oracle_budget {
    long max_results = 2'000'000;
    long max_phi = 24;
    // enumeration node cap, counts DFS states
    long max_nodes = 50'000'000;
};

struct oracle_overflow {};  // thrown when a budget trips

// All f-factors. Parallel copies of equal weight are interchangeable: only
// the canonical choice (lowest copy indices per used weight class) is listed.
std::vector<edge_subset> enumerate_factors(const multigraph& g, const degree_constraint& f,
                                           const oracle_budget& budget = {});

// Second, independently-coded enumeration (reverse edge order, count choices
// descending) used to cross-check the first.
std::vector<edge_subset> enumerate_factors_alt(const multigraph& g, const degree_constraint& f,
                                               const oracle_budget& budget = {});

struct brute_opt {
    bool feasible = false;
    int64_t weight = 0;
    edge_subset witness;  // lexicographically smallest copy-index set among optima
};

brute_opt brute_max_weight(const multigraph& g, const degree_constraint& f,
                           const oracle_budget& budget = {});

struct shortest_result {
    bool negative_cycle = false;
    edge_subset cycle;                        // witness when negative_cycle
    std::vector<int64_t> dist;                // dist[v], INT64_MAX = unreachable
    std::vector<std::vector<int>> path;       // vertex sequence v..t realizing dist[v]
};

shortest_result brute_shortest(const multigraph& g, int t, const oracle_budget& budget = {});

// Maximum-weight matching (coverage unconstrained) on g minus the avoided
// vertex; avoid = -1 keeps every vertex. Loops are unusable. Bitmask DP, so
// n is capped around 24.
int64_t brute_matching_max(const multigraph& g, int avoid = -1);

// Same DP restricted to perfect matchings; nullopt when none exists.
std::optional<int64_t> brute_matching_perfect(const multigraph& g, int avoid = -1);

}  // namespace fct
