#include "factor/oracle.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <map>

namespace fct {

namespace {

// Per-edge usage profiles: which copies to take for every feasible count
// split across equal-weight classes. Canonical pick = lowest indices within
// a class, so permuting equal copies never yields a second listing.
struct edge_choice {
    int uses;                  // copies taken; a loop adds 2*uses to its vertex degree
    std::vector<int> copies;   // canonical copy indices
    int64_t weight;
};

std::vector<edge_choice> edge_choices(const edge& e) {
    std::map<int64_t, std::vector<int>> classes;  // weight -> copy indices
    for (int k = 0; k < e.mult(); k++) classes[e.weights[k]].push_back(k);
    std::vector<std::pair<int64_t, std::vector<int>>> cls(classes.begin(), classes.end());
    std::vector<edge_choice> out;
    std::vector<int> take(cls.size(), 0);
    while (true) {
        edge_choice c;
        c.uses = 0;
        c.weight = 0;
        for (size_t i = 0; i < cls.size(); i++) {
            for (int j = 0; j < take[i]; j++) c.copies.push_back(cls[i].second[j]);
            c.uses += take[i];
            c.weight += cls[i].first * take[i];
        }
        std::sort(c.copies.begin(), c.copies.end());
        out.push_back(std::move(c));
        size_t i = 0;
        while (i < cls.size() && take[i] == (int)cls[i].second.size()) take[i++] = 0;
        if (i == cls.size()) break;
        take[i]++;
    }
    return out;
}

struct enumerator {
    const multigraph& g;
    const degree_constraint& f;
    const oracle_budget& budget;
    bool reverse;
    std::vector<std::vector<edge_choice>> choices;
    std::vector<int> order;
    std::vector<int> need;   // remaining degree per vertex
    std::vector<int> slack;  // degree capacity of unvisited edges per vertex
    std::vector<std::pair<int, int>> picked;
    std::vector<edge_subset> results;
    long nodes = 0;

    enumerator(const multigraph& g_, const degree_constraint& f_, const oracle_budget& b,
               bool rev)
        : g(g_), f(f_), budget(b), reverse(rev) {
        if (f.phi() > budget.max_phi) throw oracle_overflow{};
        for (const edge& e : g.edges) {
            choices.push_back(edge_choices(e));
            if (reverse) std::reverse(choices.back().begin(), choices.back().end());
        }
        order.resize(g.edges.size());
        for (size_t i = 0; i < order.size(); i++) order[i] = (int)i;
        if (reverse) std::reverse(order.begin(), order.end());
        need.resize(g.n);
        for (int v = 0; v < g.n; v++) need[v] = f(v);
        slack.assign(g.n, 0);
        for (int i : order) {
            const edge& e = g.edges[i];
            slack[e.u] += e.mult();
            slack[e.v] += e.mult();  // loop lands here twice
        }
    }

    void run(size_t pos) {
        if (++nodes > budget.max_nodes) throw oracle_overflow{};
        if (pos == order.size()) {
            for (int v = 0; v < g.n; v++)
                if (need[v] != 0) return;
            edge_subset s;
            s.picks = picked;
            std::sort(s.picks.begin(), s.picks.end());
            results.push_back(std::move(s));
            if ((long)results.size() > budget.max_results) throw oracle_overflow{};
            return;
        }
        int ei = order[pos];
        const edge& e = g.edges[ei];
        slack[e.u] -= e.mult();
        slack[e.v] -= e.mult();
        for (const edge_choice& c : choices[ei]) {
            int du = e.is_loop() ? 2 * c.uses : c.uses;
            bool ok = du <= need[e.u] && need[e.u] <= slack[e.u] + du;
            if (!e.is_loop())
                ok = ok && c.uses <= need[e.v] && need[e.v] <= slack[e.v] + c.uses;
            if (!ok) continue;
            need[e.u] -= du;
            if (!e.is_loop()) need[e.v] -= c.uses;
            for (int k : c.copies) picked.emplace_back(ei, k);
            run(pos + 1);
            for (size_t j = 0; j < c.copies.size(); j++) picked.pop_back();
            need[e.u] += du;
            if (!e.is_loop()) need[e.v] += c.uses;
        }
        slack[e.u] += e.mult();
        slack[e.v] += e.mult();
    }
};

}  // namespace

std::vector<edge_subset> enumerate_factors(const multigraph& g, const degree_constraint& f,
                                           const oracle_budget& budget) {
    enumerator en(g, f, budget, false);
    en.run(0);
    return en.results;
}

std::vector<edge_subset> enumerate_factors_alt(const multigraph& g, const degree_constraint& f,
                                               const oracle_budget& budget) {
    enumerator en(g, f, budget, true);
    en.run(0);
    return en.results;
}

brute_opt brute_max_weight(const multigraph& g, const degree_constraint& f,
                           const oracle_budget& budget) {
    brute_opt r;
    for (const edge_subset& s : enumerate_factors(g, f, budget)) {
        int64_t w = subset_weight(g, s);
        if (!r.feasible || w > r.weight || (w == r.weight && s.picks < r.witness.picks)) {
            r.feasible = true;
            r.weight = w;
            r.witness = s;
        }
    }
    return r;
}

namespace {

// cheapest copy of each non-loop edge; paths and cycles never reuse an edge
// so the cheapest copy is always the right one
struct cheap_adj {
    std::vector<std::vector<std::pair<int, int>>> at;  // vertex -> (edge id, copy)
    const multigraph& g;

    explicit cheap_adj(const multigraph& g_) : g(g_) {
        at.resize(g.n);
        for (size_t i = 0; i < g.edges.size(); i++) {
            const edge& e = g.edges[i];
            if (e.is_loop()) continue;
            int k = (int)(std::min_element(e.weights.begin(), e.weights.end()) -
                          e.weights.begin());
            at[e.u].emplace_back((int)i, k);
            at[e.v].emplace_back((int)i, k);
        }
    }

    int64_t w(std::pair<int, int> ek) const { return g.edges[ek.first].weights[ek.second]; }
};

struct cycle_finder {
    const multigraph& g;
    const cheap_adj& adj;
    const oracle_budget& budget;
    shortest_result* out;
    int anchor = 0;
    std::vector<bool> used;
    std::vector<std::pair<int, int>> picks;
    int64_t acc = 0;
    long nodes = 0;

    cycle_finder(const multigraph& g_, const cheap_adj& a, const oracle_budget& b,
                 shortest_result* o)
        : g(g_), adj(a), budget(b), out(o) {}

    bool dfs(int v, int len, int from) {
        if (++nodes > budget.max_nodes) throw oracle_overflow{};
        for (auto ek : adj.at[v]) {
            int u = g.edges[ek.first].other(v);
            if (u == from) continue;  // immediate backtrack; 2-cycles handled upfront
            if (u < anchor) continue;  // anchor is the least vertex of its cycle
            if (u == anchor) {
                if (len + 1 >= 3 && acc + adj.w(ek) < 0) {
                    out->negative_cycle = true;
                    for (auto p : picks) out->cycle.add(p.first, p.second);
                    out->cycle.add(ek.first, ek.second);
                    return true;
                }
                continue;
            }
            if (used[u]) continue;
            used[u] = true;
            acc += adj.w(ek);
            picks.push_back(ek);
            bool hit = dfs(u, len + 1, v);
            picks.pop_back();
            acc -= adj.w(ek);
            used[u] = false;
            if (hit) return true;
        }
        return false;
    }
};

struct path_finder {
    const multigraph& g;
    const cheap_adj& adj;
    const oracle_budget& budget;
    int t;
    std::vector<bool> used;
    std::vector<int> stack;
    int64_t acc = 0;
    int64_t best = INT64_MAX;
    std::vector<int> best_path;
    long nodes = 0;

    path_finder(const multigraph& g_, const cheap_adj& a, const oracle_budget& b, int t_)
        : g(g_), adj(a), budget(b), t(t_) {
        used.assign(g.n, false);
    }

    void dfs(int v) {
        if (++nodes > budget.max_nodes) throw oracle_overflow{};
        if (v == t) {
            if (acc < best) {
                best = acc;
                best_path = stack;
            }
            return;
        }
        for (auto ek : adj.at[v]) {
            int u = g.edges[ek.first].other(v);
            if (used[u]) continue;
            used[u] = true;
            stack.push_back(u);
            acc += adj.w(ek);
            dfs(u);
            acc -= adj.w(ek);
            stack.pop_back();
            used[u] = false;
        }
    }
};

}  // namespace

shortest_result brute_shortest(const multigraph& g, int t, const oracle_budget& budget) {
    shortest_result r;

    // negative loops and parallel pairs first, then simple cycles of length >= 3
    std::map<std::pair<int, int>, std::vector<std::pair<int64_t, std::pair<int, int>>>> pairs;
    for (size_t i = 0; i < g.edges.size(); i++) {
        const edge& e = g.edges[i];
        if (e.is_loop()) {
            for (int k = 0; k < e.mult(); k++)
                if (e.weights[k] < 0) {
                    r.negative_cycle = true;
                    r.cycle.add((int)i, k);
                    return r;
                }
        } else {
            auto key = std::minmax(e.u, e.v);
            for (int k = 0; k < e.mult(); k++)
                pairs[{key.first, key.second}].push_back({e.weights[k], {(int)i, k}});
        }
    }
    for (auto& [key, copies] : pairs) {
        (void)key;
        if (copies.size() < 2) continue;
        std::sort(copies.begin(), copies.end());
        if (copies[0].first + copies[1].first < 0) {
            r.negative_cycle = true;
            r.cycle.add(copies[0].second.first, copies[0].second.second);
            r.cycle.add(copies[1].second.first, copies[1].second.second);
            return r;
        }
    }
    cheap_adj adj(g);
    {
        cycle_finder cf(g, adj, budget, &r);
        cf.used.assign(g.n, false);
        for (int a = 0; a < g.n; a++) {
            cf.anchor = a;
            if (cf.dfs(a, 0, -1)) return r;
        }
    }

    r.dist.assign(g.n, INT64_MAX);
    r.path.resize(g.n);
    r.dist[t] = 0;
    r.path[t] = {t};
    for (int v = 0; v < g.n; v++) {
        if (v == t) continue;
        path_finder pf(g, adj, budget, t);
        pf.used[v] = true;
        pf.stack.push_back(v);
        pf.dfs(v);
        if (pf.best != INT64_MAX) {
            r.dist[v] = pf.best;
            r.path[v] = pf.best_path;
        }
    }
    return r;
}

namespace {

int64_t matching_dp(const multigraph& g, int avoid, bool perfect, bool* feasible) {
    int n = g.n;
    if (n > 24) std::abort();
    std::vector<std::vector<int64_t>> wmat(n, std::vector<int64_t>(n, INT64_MIN));
    for (const edge& e : g.edges) {
        if (e.is_loop()) continue;
        int64_t w = *std::max_element(e.weights.begin(), e.weights.end());
        if (w > wmat[e.u][e.v]) wmat[e.u][e.v] = wmat[e.v][e.u] = w;
    }
    const int64_t NEG = INT64_MIN / 4;
    std::vector<int64_t> dp(size_t(1) << n);
    dp[0] = 0;
    for (uint32_t mask = 1; mask < (uint32_t(1) << n); mask++) {
        int v = __builtin_ctz(mask);
        uint32_t rest = mask & (mask - 1);
        // leave v unmatched: always fine when coverage is unconstrained,
        // and for the avoided (deleted) vertex even in perfect mode
        int64_t best = (!perfect || v == avoid) ? dp[rest] : NEG;
        if (v != avoid) {
            for (int u = v + 1; u < n; u++) {
                if (!(mask >> u & 1) || u == avoid) continue;
                if (wmat[u][v] == INT64_MIN) continue;
                int64_t sub = dp[rest & ~(uint32_t(1) << u)];
                if (sub <= NEG) continue;
                if (sub + wmat[u][v] > best) best = sub + wmat[u][v];
            }
        }
        dp[mask] = best;
    }
    uint32_t full = n == 32 ? ~uint32_t(0) : (uint32_t(1) << n) - 1;
    if (feasible) *feasible = dp[full] > NEG;
    return dp[full];
}

}  // namespace

int64_t brute_matching_max(const multigraph& g, int avoid) {
    bool ok;
    return matching_dp(g, avoid, false, &ok);
}

std::optional<int64_t> brute_matching_perfect(const multigraph& g, int avoid) {
    bool ok;
    int64_t w = matching_dp(g, avoid, true, &ok);
    if (!ok) return std::nullopt;
    return w;
}

}  // namespace fct
