#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fct {

// Undirected multigraph. Each declared edge carries per-copy weights; loops
// (u == v) are allowed and count twice toward degrees.
struct edge {
    int u = 0, v = 0;
    std::vector<int64_t> weights;  // one entry per parallel copy

    int mult() const { return (int)weights.size(); }
    bool is_loop() const { return u == v; }
    int other(int x) const { return x == u ? v : u; }
};

struct multigraph {
    int n = 0;
    std::vector<edge> edges;

    int add_edge(int u, int v, std::vector<int64_t> w);
    bool valid(std::string* why = nullptr) const;
    int64_t max_abs_weight() const;
};

// Degree constraint f plus at most one +-1 perturbation at a vertex.
struct degree_constraint {
    std::vector<int> f;
    int perturbed_vertex = -1;
    int perturbed_delta = 0;  // -1 lower, +1 upper, 0 none

    int operator()(int v) const {
        return f[v] + (v == perturbed_vertex ? perturbed_delta : 0);
    }
    long phi() const {
        long s = perturbed_delta != 0 && perturbed_vertex >= 0 ? perturbed_delta : 0;
        for (int x : f) s += x;
        return s;
    }
};

degree_constraint perturb_lower(const degree_constraint& f, int v);
degree_constraint perturb_upper(const degree_constraint& f, int v);

// Multiset of (edge id, copy index) picks; the representation for factors
// and matchings throughout.
struct edge_subset {
    std::vector<std::pair<int, int>> picks;

    void add(int e, int copy) { picks.emplace_back(e, copy); }
    size_t size() const { return picks.size(); }
    bool valid(const multigraph& g, std::string* why = nullptr) const;
};

int degree(const multigraph& g, const edge_subset& s, int v);
int64_t subset_weight(const multigraph& g, const edge_subset& s);
std::vector<int> degree_vector(const multigraph& g, const edge_subset& s);
bool is_factor(const multigraph& g, const degree_constraint& f, const edge_subset& s);

// G+ = g plus a new vertex s joined to every vertex by a 0-weight edge and a
// 0-weight loop at every vertex, f(s) = 1. When g has an f-factor, G+ has
// f_v- and f^v-factors for every v (the loops absorb deficiencies in even
// chunks, one odd unit goes through s).
struct critical_closure_result {
    multigraph g;
    degree_constraint f;
    int s = 0;                     // the new vertex
    int first_added_edge = 0;      // edges below this index are original
};

critical_closure_result critical_closure(const multigraph& g, const degree_constraint& f);

// Keep only the min(mult, f(u), f(v)) heaviest copies of each edge
// (min(mult, floor(f/2)) for loops); drops edges at f=0 vertices.
multigraph prune_parallel(const multigraph& g, const degree_constraint& f);

}  // namespace fct
