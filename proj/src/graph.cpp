#include "factor/graph.hpp"

#include <algorithm>
#include <numeric>

namespace fct {

int multigraph::add_edge(int u, int v, std::vector<int64_t> w) {
    edge e;
    e.u = u;
    e.v = v;
    e.weights = std::move(w);
    edges.push_back(std::move(e));
    return (int)edges.size() - 1;
}

bool multigraph::valid(std::string* why) const {
    for (size_t i = 0; i < edges.size(); i++) {
        const edge& e = edges[i];
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
            if (why) *why = "edge " + std::to_string(i) + ": endpoint out of range";
            return false;
        }
        if (e.weights.empty()) {
            if (why) *why = "edge " + std::to_string(i) + ": zero multiplicity";
            return false;
        }
    }
    return true;
}

int64_t multigraph::max_abs_weight() const {
    int64_t m = 0;
    for (const edge& e : edges)
        for (int64_t w : e.weights) m = std::max(m, w < 0 ? -w : w);
    return m;
}

degree_constraint perturb_lower(const degree_constraint& f, int v) {
    degree_constraint g = f;
    g.perturbed_vertex = v;
    g.perturbed_delta = -1;
    return g;
}

degree_constraint perturb_upper(const degree_constraint& f, int v) {
    degree_constraint g = f;
    g.perturbed_vertex = v;
    g.perturbed_delta = 1;
    return g;
}

bool edge_subset::valid(const multigraph& g, std::string* why) const {
    std::vector<std::pair<int, int>> seen = picks;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        if (why) *why = "copy selected twice";
        return false;
    }
    for (auto [e, k] : picks) {
        if (e < 0 || e >= (int)g.edges.size() || k < 0 || k >= g.edges[e].mult()) {
            if (why) *why = "pick out of range";
            return false;
        }
    }
    return true;
}

int degree(const multigraph& g, const edge_subset& s, int v) {
    int d = 0;
    for (auto [e, k] : s.picks) {
        (void)k;
        if (g.edges[e].u == v) d++;
        if (g.edges[e].v == v) d++;  // loop hits both branches
    }
    return d;
}

std::vector<int> degree_vector(const multigraph& g, const edge_subset& s) {
    std::vector<int> d(g.n, 0);
    for (auto [e, k] : s.picks) {
        (void)k;
        d[g.edges[e].u]++;
        d[g.edges[e].v]++;
    }
    return d;
}

int64_t subset_weight(const multigraph& g, const edge_subset& s) {
    int64_t w = 0;
    for (auto [e, k] : s.picks) w += g.edges[e].weights[k];
    return w;
}

bool is_factor(const multigraph& g, const degree_constraint& f, const edge_subset& s) {
    std::vector<int> d = degree_vector(g, s);
    for (int v = 0; v < g.n; v++)
        if (d[v] != f(v)) return false;
    return true;
}

critical_closure_result critical_closure(const multigraph& g, const degree_constraint& f) {
    critical_closure_result r;
    r.g = g;
    r.s = g.n;
    r.g.n = g.n + 1;
    r.first_added_edge = (int)g.edges.size();
    for (int v = 0; v < g.n; v++) {
        r.g.add_edge(r.s, v, {0});
        r.g.add_edge(v, v, {0});
    }
    r.f = f;
    r.f.f.push_back(1);
    return r;
}

multigraph prune_parallel(const multigraph& g, const degree_constraint& f) {
    multigraph out;
    out.n = g.n;
    for (const edge& e : g.edges) {
        int cap = e.is_loop() ? f(e.u) / 2 : std::min(f(e.u), f(e.v));
        cap = std::min(cap, e.mult());
        if (cap <= 0) continue;
        std::vector<int64_t> w = e.weights;
        std::sort(w.begin(), w.end(), std::greater<int64_t>());
        w.resize(cap);
        out.add_edge(e.u, e.v, std::move(w));
    }
    return out;
}

}  // namespace fct
