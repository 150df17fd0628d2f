#include "factor/bmatch.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace fct {

namespace {

int dsu_find(std::vector<int>& p, int x) {
    while (p[x] != x) {
        p[x] = p[p[x]];
        x = p[x];
    }
    return x;
}

}  // namespace

bmatch_tree build_bmatch_tree(const multigraph& g, const std::vector<int>& b,
                              const std::vector<int64_t>& lower) {
    bmatch_tree t;
    int n = g.n;
    if (n == 0) {
        t.error = "empty graph";
        return t;
    }
    t.nodes.resize(n);
    for (int v = 0; v < n; v++) t.nodes[v].vertex = v;
    t.y.assign(n, 0);
    for (int v = 0; v < n; v++) t.y[v] = -lower[v];

    struct item {
        int64_t zeta;
        int e, k;
    };
    std::vector<item> items;
    for (int e = 0; e < (int)g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        for (int k = 0; k < ed.mult(); k++)
            items.push_back({lower[ed.u] + lower[ed.v] + ed.weights[k], e, k});
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const item& a, const item& b2) { return a.zeta > b2.zeta; });

    std::vector<int> dsu(n), node_of(n);
    std::iota(dsu.begin(), dsu.end(), 0);
    std::iota(node_of.begin(), node_of.end(), 0);

    size_t i = 0;
    while (i < items.size()) {
        int64_t level = items[i].zeta;
        // A copy is live while its endpoints sit in distinct current nodes;
        // a loop is live only while its vertex was never contracted (joining
        // any blossom kills it).
        std::vector<item> live;
        for (; i < items.size() && items[i].zeta == level; i++) {
            const edge& ed = g.edges[items[i].e];
            if (ed.is_loop()) {
                if (node_of[dsu_find(dsu, ed.u)] == ed.u) live.push_back(items[i]);
            } else if (dsu_find(dsu, ed.u) != dsu_find(dsu, ed.v)) {
                live.push_back(items[i]);
            }
        }
        if (live.empty()) continue;

        // Components among the current nodes touched at this level. A lone
        // node kept by nothing but loops is a component too.
        std::vector<int> touched;
        std::vector<int> local;  // parallel to touched, local dsu
        auto local_id = [&](int node) {
            for (size_t j = 0; j < touched.size(); j++)
                if (touched[j] == node) return (int)j;
            touched.push_back(node);
            local.push_back((int)local.size());
            return (int)touched.size() - 1;
        };
        std::vector<std::pair<int, int>> live_ends(live.size());
        for (size_t j = 0; j < live.size(); j++) {
            const edge& ed = g.edges[live[j].e];
            int a = local_id(node_of[dsu_find(dsu, ed.u)]);
            int bb = local_id(node_of[dsu_find(dsu, ed.v)]);
            live_ends[j] = {a, bb};
            int ra = dsu_find(local, a), rb = dsu_find(local, bb);
            if (ra != rb) local[ra] = rb;
        }

        std::vector<int> comp_node(touched.size(), -1);
        for (size_t j = 0; j < touched.size(); j++) {
            int rep = dsu_find(local, (int)j);
            if (comp_node[rep] == -1) {
                comp_node[rep] = (int)t.nodes.size();
                t.nodes.emplace_back();
                t.nodes.back().zeta = level;
            }
        }
        for (size_t j = 0; j < touched.size(); j++) {
            int id = comp_node[dsu_find(local, (int)j)];
            t.nodes[touched[j]].parent = id;
            t.nodes[id].children.push_back(touched[j]);
        }
        for (size_t j = 0; j < live.size(); j++) {
            int id = comp_node[dsu_find(local, live_ends[j].first)];
            t.nodes[id].star.emplace_back(live[j].e, live[j].k);
        }
        // Contract: merge the vertex classes of each component and point the
        // surviving representative at the new node.
        for (size_t j = 0; j < live.size(); j++) {
            const edge& ed = g.edges[live[j].e];
            int ru = dsu_find(dsu, ed.u), rv = dsu_find(dsu, ed.v);
            if (ru != rv) dsu[ru] = rv;
        }
        for (int nd : touched) {
            // any vertex inside nd locates the merged class
            int probe = nd < n ? nd : t.nodes[nd].children[0];
            while (probe >= n) probe = t.nodes[probe].children[0];
            node_of[dsu_find(dsu, probe)] = t.nodes[nd].parent;
        }
    }

    int r0 = dsu_find(dsu, 0);
    for (int v = 1; v < n; v++)
        if (dsu_find(dsu, v) != r0) {
            t.error = "shrinking stalled before a single root; graph disconnected "
                      "or lower weights not a critical family";
            return t;
        }
    t.root = node_of[r0];

    t.z.assign(t.nodes.size(), 0);
    for (int id = n; id < (int)t.nodes.size(); id++) {
        int p = t.nodes[id].parent;
        t.z[id] = p == -1 ? t.nodes[id].zeta : t.nodes[id].zeta - t.nodes[p].zeta;
    }
    t.ok = true;
    return t;
}

std::vector<int> blossom_vertices(const bmatch_tree& t, int node) {
    std::vector<int> out, stack{node};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (t.nodes[x].vertex >= 0)
            out.push_back(t.nodes[x].vertex);
        else
            for (int c : t.nodes[x].children) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int64_t bmatch_zsum(const bmatch_tree& t, int u, int v) {
    std::vector<char> anc(t.nodes.size(), 0);
    for (int a = t.nodes[u].parent; a != -1; a = t.nodes[a].parent) anc[a] = 1;
    int64_t s = 0;
    for (int a = t.nodes[v].parent; a != -1; a = t.nodes[a].parent)
        if (anc[a]) s += t.z[a];
    return s;
}

namespace {

bool b_match_rec(const bmatch_tree& t, const multigraph& g, const std::vector<int>& b,
                 int node, int v, const field& fld, rng& r, edge_subset& out) {
    const bmatch_node& B = t.nodes[node];
    if (B.vertex >= 0) return true;  // leaf: its edges live in ancestor stars

    int nc = (int)B.children.size();
    std::vector<int> child_of(g.n, -1);
    for (int ci = 0; ci < nc; ci++)
        for (int leaf : blossom_vertices(t, B.children[ci])) child_of[leaf] = ci;

    multigraph gs;
    gs.n = nc;
    std::vector<std::pair<int, int>> src;  // per gs record: the star copy
    for (auto [e, k] : B.star) {
        const edge& ed = g.edges[e];
        gs.add_edge(child_of[ed.u], child_of[ed.v], {ed.weights[k]});
        src.emplace_back(e, k);
    }

    degree_constraint fs;
    fs.f.resize(nc);
    for (int ci = 0; ci < nc; ci++) {
        int c = B.children[ci];
        fs.f[ci] = t.nodes[c].vertex >= 0 ? b[t.nodes[c].vertex] : 1;
    }
    fs.f[child_of[v]] -= 1;

    factor_result res = find_general_factor(gs, fs, fld, r);
    if (!res.found) return false;

    std::vector<int> entry(nc, -1);
    for (auto [ge, gk] : res.factor.picks) {
        (void)gk;
        auto [e, k] = src[ge];
        out.add(e, k);
        const edge& ed = g.edges[e];
        if (entry[child_of[ed.u]] == -1) entry[child_of[ed.u]] = ed.u;
        if (entry[child_of[ed.v]] == -1) entry[child_of[ed.v]] = ed.v;
    }

    for (int ci = 0; ci < nc; ci++) {
        int c = B.children[ci];
        if (t.nodes[c].vertex >= 0) continue;
        int x = ci == child_of[v] ? v : entry[ci];
        assert(x != -1);  // a blossom child off the target has exactly one matched edge
        if (!b_match_rec(t, g, b, c, x, fld, r, out)) return false;
    }
    return true;
}

}  // namespace

std::optional<edge_subset> b_match(const bmatch_tree& t, const multigraph& g,
                                   const std::vector<int>& b, int node, int v,
                                   const field& fld, rng& r) {
    edge_subset out;
    if (!b_match_rec(t, g, b, node, v, fld, r, out)) return std::nullopt;
    return out;
}

bool verify_bmatch(const bmatch_tree& t, const multigraph& g, const std::vector<int>& b,
                   const edge_subset& m, int v, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!t.ok) return fail("tree not built");
    std::string w;
    if (!m.valid(g, &w)) return fail("matching invalid: " + w);

    std::vector<int> d = degree_vector(g, m);
    for (int x = 0; x < g.n; x++)
        if (d[x] != b[x] - (x == v ? 1 : 0))
            return fail("degree off at vertex " + std::to_string(x));

    for (int id = g.n; id < (int)t.nodes.size(); id++)
        if (id != t.root && t.z[id] < 0)
            return fail("negative z off the root");

    std::vector<std::vector<char>> picked(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); e++)
        picked[e].assign(g.edges[e].mult(), 0);
    for (auto [e, k] : m.picks) picked[e][k] = 1;

    for (int e = 0; e < (int)g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        int64_t zs = bmatch_zsum(t, ed.u, ed.v);
        int64_t cap = t.y[ed.u] + t.y[ed.v] + zs;
        for (int k = 0; k < ed.mult(); k++) {
            if (ed.weights[k] > cap)
                return fail("copy not dominated at edge " + std::to_string(e));
            if (picked[e][k] && ed.weights[k] != cap)
                return fail("matched copy not tight at edge " + std::to_string(e));
        }
    }

    for (int id = g.n; id < (int)t.nodes.size(); id++) {
        std::vector<int> vs = blossom_vertices(t, id);
        std::vector<char> in(g.n, 0);
        long bsum = 0;
        for (int x : vs) {
            in[x] = 1;
            bsum += b[x];
        }
        if (bsum % 2 == 0) return fail("blossom with even demand sum");
        long inside = 0;
        for (auto [e, k] : m.picks) {
            (void)k;
            if (in[g.edges[e].u] && in[g.edges[e].v]) inside++;
        }
        if (inside != (bsum - 1) / 2)
            return fail("blossom not respected at node " + std::to_string(id));
    }
    return true;
}

bmatch_instance bmatch_closure(const multigraph& g, const std::vector<int>& b) {
    bmatch_instance out;
    // b=0 vertices can carry no matched edge and cannot be lowered; drop them.
    out.vmap.assign(g.n, -1);
    for (int v = 0; v < g.n; v++)
        if (b[v] > 0) {
            out.vmap[v] = out.g.n++;
            out.b.push_back(b[v]);
        }
    out.s = out.g.n++;
    out.b.push_back(1);
    for (int e = 0; e < (int)g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        int cap = ed.is_loop() ? b[ed.u] / 2 : std::min(b[ed.u], b[ed.v]);
        if (cap == 0) continue;
        for (int k = 0; k < ed.mult(); k++) {
            out.g.add_edge(out.vmap[ed.u], out.vmap[ed.v],
                           std::vector<int64_t>(cap, ed.weights[k]));
            out.from.emplace_back(e, k);
        }
    }
    for (int v = 0; v < g.n; v++) {
        if (b[v] == 0) continue;
        out.g.add_edge(out.s, out.vmap[v], {0});
        out.from.emplace_back(-1, -1);
        if (b[v] / 2 > 0) {
            out.g.add_edge(out.vmap[v], out.vmap[v],
                           std::vector<int64_t>(b[v] / 2, 0));
            out.from.emplace_back(-1, -1);
        }
    }
    return out;
}

bmatch_result max_bmatch(const multigraph& g, const std::vector<int>& b, rng& r) {
    bmatch_result res;
    bmatch_instance inst = bmatch_closure(g, b);

    degree_constraint c;
    c.f = inst.b;
    long phi = c.phi();
    long bound = 4 * (inst.g.max_abs_weight() + 1) * (phi + 4);

    for (int attempt = 0; attempt < solve_max_retries; attempt++) {
        res.retries = attempt;
        field fld = choose_field(phi + 2, bound, r);

        if (!has_factor(inst.g, perturb_lower(c, inst.s), fld, r)) {
            if (attempt == 0) return res;  // no b_s-matching: infeasible
            continue;
        }
        perturb_result lw = lower_weights(inst.g, c, fld, r);
        if (!lw.ok) continue;
        bool degenerate = false;
        for (int64_t wv : lw.w) degenerate |= wv == weight_neg_inf;
        if (degenerate) continue;  // closure of a feasible instance is critical

        bmatch_tree t = build_bmatch_tree(inst.g, inst.b, lw.w);
        if (!t.ok) continue;

        auto m = b_match(t, inst.g, inst.b, t.root, inst.s, fld, r);
        if (!m) continue;
        if (!verify_bmatch(t, inst.g, inst.b, *m, inst.s)) continue;

        res.found = true;
        res.tree = std::move(t);
        res.matching = std::move(*m);
        res.weight = subset_weight(inst.g, res.matching);
        res.use.resize(g.edges.size());
        for (size_t e = 0; e < g.edges.size(); e++) res.use[e].assign(g.edges[e].mult(), 0);
        for (auto [e, k] : res.matching.picks) {
            (void)k;
            auto [se, sk] = inst.from[e];
            if (se >= 0) res.use[se][sk]++;
        }
        return res;
    }
    res.gave_up = true;
    return res;
}

}  // namespace fct
