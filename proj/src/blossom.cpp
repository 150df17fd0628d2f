#include "factor/blossom.hpp"

#include <algorithm>
#include <cassert>
#include <map>
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

zeta_tables edge_zetas(const multigraph& g, const perturb_result& lo,
                       const perturb_result& hi) {
    zeta_tables zt;
    if (!lo.ok || !hi.ok || (int)lo.w.size() < g.n || (int)hi.w.size() < g.n) {
        zt.error = "perturbation weights missing";
        return zt;
    }
    for (int v = 0; v < g.n; v++)
        if (lo.w[v] == weight_neg_inf || hi.w[v] == weight_neg_inf) {
            zt.error = "no perturbed factor at vertex " + std::to_string(v) +
                       "; graph not critical";
            return zt;
        }
    zt.zeta_v.resize(g.n);
    for (int v = 0; v < g.n; v++) zt.zeta_v[v] = lo.w[v] + hi.w[v];
    zt.zeta_low.resize(g.edges.size());
    zt.zeta_high.resize(g.edges.size());
    for (int e = 0; e < (int)g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        zt.zeta_low[e].resize(ed.mult());
        zt.zeta_high[e].resize(ed.mult());
        for (int k = 0; k < ed.mult(); k++) {
            zt.zeta_low[e][k] = lo.w[ed.u] + lo.w[ed.v] + ed.weights[k];
            zt.zeta_high[e][k] = hi.w[ed.u] + hi.w[ed.v] - ed.weights[k];
            if (zt.zeta_low[e][k] + zt.zeta_high[e][k] !=
                zt.zeta_v[ed.u] + zt.zeta_v[ed.v]) {
                zt.error = "zeta identity violated at edge " + std::to_string(e);
                return zt;
            }
        }
    }
    zt.ok = true;
    return zt;
}

blossom_forest find_vb_sets(const multigraph& g, const zeta_tables& zt,
                            const std::vector<int64_t>& lower) {
    blossom_forest wf;
    int n = g.n;
    if (!zt.ok) {
        wf.error = "zeta tables not built";
        return wf;
    }
    if (n == 0) {
        wf.error = "empty graph";
        return wf;
    }
    wf.nodes.resize(n);
    for (int v = 0; v < n; v++) wf.nodes[v].vertex = v;
    wf.y.assign(n, 0);
    for (int v = 0; v < n; v++) wf.y[v] = -lower[v];
    wf.iu.resize(g.edges.size());
    wf.iv.resize(g.edges.size());
    for (int e = 0; e < (int)g.edges.size(); e++) {
        wf.iu[e].assign(g.edges[e].mult(), 0);
        wf.iv[e].assign(g.edges[e].mult(), 0);
    }

    // A copy enters the shrink graph at min of its two keys and stays until
    // contracted, so liveness is recomputed per level instead of consumed.
    std::vector<std::vector<int64_t>> minz(g.edges.size());
    std::vector<int64_t> levels;
    for (int e = 0; e < (int)g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        minz[e].resize(ed.mult());
        for (int k = 0; k < ed.mult(); k++) {
            minz[e][k] = std::min(zt.zeta_low[e][k], zt.zeta_high[e][k]);
            levels.push_back(minz[e][k]);
        }
    }
    std::sort(levels.begin(), levels.end(), std::greater<int64_t>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<int> dsu(n), node_of(n);
    std::iota(dsu.begin(), dsu.end(), 0);
    std::iota(node_of.begin(), node_of.end(), 0);

    for (int64_t L : levels) {
        // live copies: cross ones between distinct current nodes, loops only
        // while their vertex was never contracted
        struct lc {
            int e, k, a, b;  // a, b: local ids
        };
        std::vector<lc> live;
        std::vector<int> touched;
        std::vector<int> local;
        std::vector<char> carrier;  // local id holds a live loop
        auto local_id = [&](int node) {
            for (size_t j = 0; j < touched.size(); j++)
                if (touched[j] == node) return (int)j;
            touched.push_back(node);
            local.push_back((int)local.size());
            carrier.push_back(0);
            return (int)touched.size() - 1;
        };
        for (int e = 0; e < (int)g.edges.size(); e++) {
            const edge& ed = g.edges[e];
            for (int k = 0; k < ed.mult(); k++) {
                if (minz[e][k] < L) continue;
                if (ed.is_loop()) {
                    if (node_of[dsu_find(dsu, ed.u)] == ed.u) carrier[local_id(ed.u)] = 1;
                } else {
                    int nu = node_of[dsu_find(dsu, ed.u)];
                    int nv = node_of[dsu_find(dsu, ed.v)];
                    if (nu != nv) live.push_back({e, k, local_id(nu), local_id(nv)});
                }
            }
        }
        if (touched.empty()) continue;

        // bridges among the live cross copies; parallel copies are distinct
        // edges, so a doubled bridge is no bridge
        int T = (int)touched.size();
        std::vector<std::vector<std::pair<int, int>>> adj(T);
        for (int j = 0; j < (int)live.size(); j++) {
            adj[live[j].a].emplace_back(live[j].b, j);
            adj[live[j].b].emplace_back(live[j].a, j);
        }
        std::vector<char> bridge(live.size(), 0);
        std::vector<int> disc(T, -1), low(T, 0);
        int timer = 0;
        struct frame {
            int x, pe;
            size_t it;
        };
        for (int s0 = 0; s0 < T; s0++) {
            if (disc[s0] != -1) continue;
            std::vector<frame> fst{{s0, -1, 0}};
            disc[s0] = low[s0] = timer++;
            while (!fst.empty()) {
                frame& fr = fst.back();
                if (fr.it < adj[fr.x].size()) {
                    auto [yn, ej] = adj[fr.x][fr.it++];
                    if (ej == fr.pe) continue;
                    if (disc[yn] == -1) {
                        disc[yn] = low[yn] = timer++;
                        fst.push_back({yn, ej, 0});
                    } else {
                        low[fr.x] = std::min(low[fr.x], disc[yn]);
                    }
                } else {
                    int x = fr.x, pe = fr.pe;
                    fst.pop_back();
                    if (!fst.empty()) {
                        int px = fst.back().x;
                        low[px] = std::min(low[px], low[x]);
                        if (low[x] > disc[px]) bridge[pe] = 1;
                    }
                }
            }
        }

        // 2-edge-connected pieces: union across non-bridge copies
        std::vector<int> comp(T);
        std::iota(comp.begin(), comp.end(), 0);
        for (int j = 0; j < (int)live.size(); j++)
            if (!bridge[j]) {
                int ra = dsu_find(comp, live[j].a), rb = dsu_find(comp, live[j].b);
                if (ra != rb) comp[ra] = rb;
            }
        std::vector<std::vector<int>> members(T);
        for (int j = 0; j < T; j++) members[dsu_find(comp, j)].push_back(j);

        for (int rep = 0; rep < T; rep++) {
            const std::vector<int>& ms = members[rep];
            if (ms.empty()) continue;
            bool has_loop = false;
            for (int j : ms) has_loop |= carrier[j];
            if (ms.size() < 2 && !has_loop) continue;  // a lone node on bridges only

            int id = (int)wf.nodes.size();
            wf.nodes.emplace_back();
            wf.nodes.back().zeta = L;
            int leaf0 = -1;
            for (int j : ms) {
                int nd = touched[j];
                wf.nodes[nd].parent = id;
                wf.nodes[id].children.push_back(nd);
                int probe = nd;
                while (probe >= n) probe = wf.nodes[probe].children[0];
                if (leaf0 == -1) leaf0 = probe;
                int ra = dsu_find(dsu, leaf0), rb = dsu_find(dsu, probe);
                if (ra != rb) dsu[ra] = rb;
            }
            node_of[dsu_find(dsu, leaf0)] = id;
        }
    }

    // the survivors are the maximal blossoms; cross copies must bridge them
    // as a tree
    std::vector<int> tops;
    std::vector<char> seen(wf.nodes.size(), 0);
    for (int v = 0; v < n; v++) {
        int t = node_of[dsu_find(dsu, v)];
        if (!seen[t]) {
            seen[t] = 1;
            tops.push_back(t);
        }
    }
    for (int t : tops)
        if (t < n) {
            wf.error = "vertex " + std::to_string(t) +
                       " never entered a blossom; weights not a critical family";
            return wf;
        }
    std::vector<int> tdsu(wf.nodes.size());
    std::iota(tdsu.begin(), tdsu.end(), 0);
    int joins = 0;
    for (int e = 0; e < (int)g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        if (ed.is_loop()) continue;
        for (int k = 0; k < ed.mult(); k++) {
            int nu = node_of[dsu_find(dsu, ed.u)];
            int nv = node_of[dsu_find(dsu, ed.v)];
            if (nu == nv) continue;
            int ra = dsu_find(tdsu, nu), rb = dsu_find(tdsu, nv);
            if (ra == rb) {
                wf.error = "cycle across maximal blossoms; weights not a critical family";
                return wf;
            }
            tdsu[ra] = rb;
            joins++;
            wf.tree_edges.emplace_back(e, k);
        }
    }
    if (joins != (int)tops.size() - 1) {
        wf.error = "maximal blossoms not connected; graph disconnected";
        return wf;
    }

    if (tops.size() == 1) {
        wf.root = tops[0];
    } else {
        wf.root = (int)wf.nodes.size();
        wf.root_artificial = true;
        wf.nodes.emplace_back();
        wf.nodes.back().zeta = levels.empty() ? 0 : levels.back();
        for (int t : tops) {
            wf.nodes[t].parent = wf.root;
            wf.nodes[wf.root].children.push_back(t);
        }
    }

    wf.z.assign(wf.nodes.size(), 0);
    for (int id = n; id < (int)wf.nodes.size(); id++) {
        int p = wf.nodes[id].parent;
        wf.z[id] = p == -1 ? wf.nodes[id].zeta : wf.nodes[id].zeta - wf.nodes[p].zeta;
        assert(id == wf.root || wf.z[id] >= 0);  // root dual may go either way
    }
    wf.ok = true;
    return wf;
}

std::vector<int> forest_vertices(const blossom_forest& wf, int node) {
    std::vector<int> out, stack{node};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (wf.nodes[x].vertex >= 0)
            out.push_back(wf.nodes[x].vertex);
        else
            for (int c : wf.nodes[x].children) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// per-copy-end I state while deciding
enum istate : char { is_far = 0, is_no = 1, is_yes = 2, is_pending = 3 };

struct inset_cache {
    const blossom_forest& wf;
    std::vector<std::vector<char>> in;
    explicit inset_cache(const blossom_forest& wf_, int n) : wf(wf_) {
        in.resize(wf.nodes.size());
        (void)n;
    }
    const std::vector<char>& operator()(int node, int n) {
        if (in[node].empty()) {
            in[node].assign(n, 0);
            for (int x : forest_vertices(wf, node)) in[node][x] = 1;
        }
        return in[node];
    }
};

}  // namespace

bool find_ib_sets(const multigraph& g, const degree_constraint& f, const zeta_tables& zt,
                  blossom_forest& wf) {
    if (!wf.ok) return false;
    auto bad = [&](const std::string& msg) {
        wf.ok = false;
        wf.error = msg;
        return false;
    };
    int n = g.n;
    std::vector<std::vector<char>> su(g.edges.size()), sv(g.edges.size());
    for (int e = 0; e < (int)g.edges.size(); e++) {
        su[e].assign(g.edges[e].mult(), is_far);
        sv[e].assign(g.edges[e].mult(), is_far);
    }
    auto state_at = [&](int e, int y) -> std::vector<char>& {
        return g.edges[e].u == y ? su[e] : sv[e];
    };

    std::vector<std::vector<std::pair<int, int>>> adj_v(n);  // (edge, copy)
    for (int e = 0; e < (int)g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        for (int k = 0; k < ed.mult(); k++) {
            adj_v[ed.u].emplace_back(e, k);
            if (ed.u != ed.v) adj_v[ed.v].emplace_back(e, k);
        }
    }

    inset_cache inset(wf, n);

    // real blossoms grouped by level, descending
    std::vector<int> internal;
    for (int id = n; id < (int)wf.nodes.size(); id++)
        if (!(wf.root_artificial && id == wf.root)) internal.push_back(id);
    std::stable_sort(internal.begin(), internal.end(), [&](int a, int b) {
        return wf.nodes[a].zeta > wf.nodes[b].zeta;
    });

    std::vector<int> dsu(n), node_of(n);
    std::iota(dsu.begin(), dsu.end(), 0);
    std::iota(node_of.begin(), node_of.end(), 0);

    size_t gi = 0;
    while (gi < internal.size()) {
        int64_t L = wf.nodes[internal[gi]].zeta;
        std::vector<int> level_nodes;
        for (; gi < internal.size() && wf.nodes[internal[gi]].zeta == L; gi++)
            level_nodes.push_back(internal[gi]);

        // classify the boundary copies of every fresh vertex
        std::vector<std::pair<int, int>> pending;
        for (int B : level_nodes) {
            const std::vector<char>& vb = inset(B, n);
            for (int c : wf.nodes[B].children) {
                if (wf.nodes[c].vertex < 0) continue;
                int y = wf.nodes[c].vertex;
                if (zt.zeta_v[y] != L)
                    return bad("zeta_v disagrees with the forest level at vertex " +
                               std::to_string(y));
                for (auto [e, k] : adj_v[y]) {
                    const edge& ed = g.edges[e];
                    int x = ed.u == y ? ed.v : ed.u;
                    if (vb[x]) continue;
                    char& stv = state_at(e, y)[k];
                    if (L > zt.zeta_high[e][k])
                        stv = is_yes;
                    else if (L == zt.zeta_low[e][k] && zt.zeta_low[e][k] != zt.zeta_v[x])
                        stv = is_yes;
                    else if (L == zt.zeta_low[e][k] && zt.zeta_v[x] == L) {
                        stv = is_pending;
                        pending.emplace_back(e, k);
                    } else
                        stv = is_no;
                }
            }
        }

        // contract this level
        for (int B : level_nodes) {
            int leaf0 = -1;
            for (int c : wf.nodes[B].children) {
                int probe = c;
                while (probe >= n) probe = wf.nodes[probe].children[0];
                if (leaf0 == -1) leaf0 = probe;
                int ra = dsu_find(dsu, leaf0), rb = dsu_find(dsu, probe);
                if (ra != rb) dsu[ra] = rb;
            }
            node_of[dsu_find(dsu, leaf0)] = B;
        }
        if (pending.empty()) continue;

        // leaf peeling on the shrunken forest decides the leftovers
        std::vector<int> tops;
        std::vector<int> tid(wf.nodes.size(), -1);
        for (int v2 = 0; v2 < n; v2++) {
            int t = node_of[dsu_find(dsu, v2)];
            if (tid[t] == -1) {
                tid[t] = (int)tops.size();
                tops.push_back(t);
            }
        }
        struct fedge {
            int e, k, ta, tb;
        };
        std::vector<fedge> fe;
        std::vector<int> fdsu(tops.size());
        std::iota(fdsu.begin(), fdsu.end(), 0);
        for (int e = 0; e < (int)g.edges.size(); e++) {
            const edge& ed = g.edges[e];
            if (ed.is_loop()) continue;
            for (int k = 0; k < ed.mult(); k++) {
                if (std::min(zt.zeta_low[e][k], zt.zeta_high[e][k]) < L) continue;
                int nu = node_of[dsu_find(dsu, ed.u)];
                int nv = node_of[dsu_find(dsu, ed.v)];
                if (nu == nv) continue;
                int ra = dsu_find(fdsu, tid[nu]), rb = dsu_find(fdsu, tid[nv]);
                if (ra == rb) return bad("shrunken graph not a forest at a level");
                fdsu[ra] = rb;
                fe.push_back({e, k, tid[nu], tid[nv]});
            }
        }
        std::vector<std::vector<int>> fadj(tops.size());
        std::vector<int> deg(tops.size(), 0);
        for (int j = 0; j < (int)fe.size(); j++) {
            fadj[fe[j].ta].push_back(j);
            fadj[fe[j].tb].push_back(j);
            deg[fe[j].ta]++;
            deg[fe[j].tb]++;
        }
        std::vector<char> removed(fe.size(), 0);
        std::vector<int> queue;
        for (int t = 0; t < (int)tops.size(); t++)
            if (deg[t] == 1) queue.push_back(t);
        while (!queue.empty()) {
            int c = queue.back();
            queue.pop_back();
            if (deg[c] != 1) continue;
            int ej = -1;
            for (int j : fadj[c])
                if (!removed[j]) {
                    ej = j;
                    break;
                }
            assert(ej != -1);
            const fedge& fc = fe[ej];
            int other = fc.ta == c ? fc.tb : fc.ta;
            int inner = node_of[dsu_find(dsu, g.edges[fc.e].u)] == tops[c]
                            ? g.edges[fc.e].u
                            : g.edges[fc.e].v;
            int outer = inner == g.edges[fc.e].u ? g.edges[fc.e].v : g.edges[fc.e].u;
            char& sin = state_at(fc.e, inner)[fc.k];
            char& sout = state_at(fc.e, outer)[fc.k];
            if (sin == is_pending || sout == is_pending) {
                if (tops[c] < n) return bad("bare vertex on the shrunken forest");
                bool in_i;
                if (sin == is_pending) {
                    const std::vector<char>& vb = inset(tops[c], n);
                    long cnt = 0, fsum = 0;
                    for (int x = 0; x < n; x++)
                        if (vb[x]) fsum += f.f[x];
                    for (int e2 = 0; e2 < (int)g.edges.size(); e2++) {
                        const edge& ed = g.edges[e2];
                        if ((bool)vb[ed.u] == (bool)vb[ed.v]) continue;
                        int yend = vb[ed.u] ? ed.u : ed.v;
                        const std::vector<char>& stv = state_at(e2, yend);
                        for (int k2 = 0; k2 < ed.mult(); k2++)
                            if (stv[k2] == is_yes) cnt++;
                    }
                    in_i = ((fsum - 1 + cnt) % 2) != 0;
                } else {
                    // exactly one end carries the edge
                    in_i = sout != is_yes;
                }
                char want_in = in_i ? is_yes : is_no;
                char want_out = in_i ? is_no : is_yes;
                if (sin != is_pending && sin != want_in)
                    return bad("peel contradicts a decided boundary copy");
                if (sout != is_pending && sout != want_out)
                    return bad("peel contradicts a decided boundary copy");
                sin = want_in;
                sout = want_out;
            }
            removed[ej] = 1;
            deg[c]--;
            deg[other]--;
            if (deg[other] == 1) queue.push_back(other);
        }
        for (auto [e, k] : pending) {
            if (su[e][k] == is_pending || sv[e][k] == is_pending)
                return bad("boundary copy left undecided after peeling");
        }
    }

    for (int e = 0; e < (int)g.edges.size(); e++)
        for (int k = 0; k < g.edges[e].mult(); k++) {
            wf.iu[e][k] = su[e][k] == is_yes;
            wf.iv[e][k] = sv[e][k] == is_yes;
        }

    // every blossom must leave f(V(B)) - 1 + |I(B)| even, the parity that
    // makes a one-short degree sum absorbable inside
    for (int id = n; id < (int)wf.nodes.size(); id++) {
        if (wf.root_artificial && id == wf.root) continue;
        const std::vector<char>& vb = inset(id, n);
        long fsum = 0, cnt = 0;
        for (int x = 0; x < n; x++)
            if (vb[x]) fsum += f.f[x];
        for (int e = 0; e < (int)g.edges.size(); e++) {
            const edge& ed = g.edges[e];
            if ((bool)vb[ed.u] == (bool)vb[ed.v]) continue;
            const std::vector<char>& flag = vb[ed.u] ? wf.iu[e] : wf.iv[e];
            for (int k = 0; k < ed.mult(); k++)
                if (flag[k]) cnt++;
        }
        if ((fsum - 1 + cnt) % 2 != 0)
            return bad("I-set parity violated at node " + std::to_string(id));
    }
    wf.ib_done = true;
    return true;
}

int64_t hat_yz(const blossom_forest& wf, const multigraph& g, int e, int k) {
    const edge& ed = g.edges[e];
    int bu = wf.nodes[ed.u].parent, bv = wf.nodes[ed.v].parent;
    std::vector<char> anc(wf.nodes.size(), 0);
    for (int a = bu; a != -1; a = wf.nodes[a].parent) anc[a] = 1;
    int nca = -1;
    for (int a = bv; a != -1; a = wf.nodes[a].parent)
        if (anc[a]) {
            nca = a;
            break;
        }
    assert(nca != -1);
    int64_t base = wf.y[ed.u] + wf.y[ed.v];
    bool inu = wf.iu[e][k], inv = wf.iv[e][k];
    if (inu && inv)
        return base + wf.nodes[bu].zeta + wf.nodes[bv].zeta - wf.nodes[nca].zeta;
    if (inu) return base + wf.nodes[bu].zeta;
    if (inv) return base + wf.nodes[bv].zeta;
    return base + wf.nodes[nca].zeta;
}

std::optional<edge_subset> extract_perturbation(const multigraph& g,
                                                const degree_constraint& f,
                                                const blossom_forest& wf, int v, int dir,
                                                const field& fld, rng& r) {
    if (!wf.ok || !wf.ib_done) return std::nullopt;
    int n = g.n;
    std::vector<int> rd(n);
    for (int x = 0; x < n; x++) rd[x] = f.f[x] + (x == v ? dir : 0);
    if (rd[v] < 0) return std::nullopt;

    std::vector<std::vector<char>> st(g.edges.size());   // 0 open, 1 in, 2 out
    std::vector<std::vector<int64_t>> hv(g.edges.size());
    for (int e = 0; e < (int)g.edges.size(); e++) {
        st[e].assign(g.edges[e].mult(), 0);
        hv[e].resize(g.edges[e].mult());
        for (int k = 0; k < g.edges[e].mult(); k++) hv[e][k] = hat_yz(wf, g, e, k);
    }
    auto take = [&](int e, int k) {
        st[e][k] = 1;
        rd[g.edges[e].u]--;
        rd[g.edges[e].v]--;
    };

    // strictly underrated copies sit in every maximum perturbation
    for (int e = 0; e < (int)g.edges.size(); e++)
        for (int k = 0; k < g.edges[e].mult(); k++)
            if (g.edges[e].weights[k] > hv[e][k]) take(e, k);

    inset_cache inset(wf, n);

    // bridge copies between maximal blossoms: in iff the cut-off side has odd
    // residual demand
    std::vector<int> maxids =
        wf.root_artificial ? wf.nodes[wf.root].children : std::vector<int>{wf.root};
    if (!wf.tree_edges.empty()) {
        std::vector<int> top_of(n, -1), tix(wf.nodes.size(), -1);
        for (int i = 0; i < (int)maxids.size(); i++) {
            tix[maxids[i]] = i;
            for (int x : forest_vertices(wf, maxids[i])) top_of[x] = i;
        }
        std::vector<std::vector<std::pair<int, int>>> tadj(maxids.size());
        for (int ti = 0; ti < (int)wf.tree_edges.size(); ti++) {
            auto [e, k] = wf.tree_edges[ti];
            (void)k;
            int a = top_of[g.edges[e].u], b = top_of[g.edges[e].v];
            tadj[a].emplace_back(b, ti);
            tadj[b].emplace_back(a, ti);
        }
        for (int ti = 0; ti < (int)wf.tree_edges.size(); ti++) {
            auto [e, k] = wf.tree_edges[ti];
            if (st[e][k] != 0) continue;
            std::vector<char> reach(maxids.size(), 0);
            std::vector<int> stack{top_of[g.edges[e].u]};
            reach[stack[0]] = 1;
            while (!stack.empty()) {
                int a = stack.back();
                stack.pop_back();
                for (auto [b, tj] : tadj[a])
                    if (tj != ti && !reach[b]) {
                        reach[b] = 1;
                        stack.push_back(b);
                    }
            }
            long ps = 0;
            for (int x = 0; x < n; x++)
                if (reach[top_of[x]]) ps += f.f[x] + (x == v ? dir : 0);
            if (ps % 2 != 0)
                take(e, k);
            else
                st[e][k] = 2;
        }
        // any further cross copy is dominated in a sound family
        for (int e = 0; e < (int)g.edges.size(); e++) {
            const edge& ed = g.edges[e];
            if (ed.is_loop()) continue;
            if (top_of[ed.u] == top_of[ed.v]) continue;
            for (int k = 0; k < ed.mult(); k++)
                if (st[e][k] == 0) st[e][k] = 2;
        }
    }

    // top-down: per blossom an exact-degree solve over its tight level
    // copies, contracted children replaced by gadgets
    std::vector<int> stack = maxids;
    while (!stack.empty()) {
        int B = stack.back();
        stack.pop_back();
        const blossom_node& nd = wf.nodes[B];
        int nc = (int)nd.children.size();
        const std::vector<char>& vb = inset(B, n);
        std::vector<int> child_of(n, -1);
        for (int ci = 0; ci < nc; ci++)
            for (int x : forest_vertices(wf, nd.children[ci])) child_of[x] = ci;

        // classify the copies of this level
        std::vector<std::pair<int, int>> cands;
        std::vector<std::vector<int>> cand_ix(g.edges.size());
        for (int e = 0; e < (int)g.edges.size(); e++)
            cand_ix[e].assign(g.edges[e].mult(), -1);
        for (int e = 0; e < (int)g.edges.size(); e++) {
            const edge& ed = g.edges[e];
            for (int k = 0; k < ed.mult(); k++) {
                if (!vb[ed.u] || !vb[ed.v]) continue;
                int cu = child_of[ed.u], cv = child_of[ed.v];
                if (cu == cv && !(ed.is_loop() && wf.nodes[nd.children[cu]].vertex >= 0))
                    continue;  // inside one child: a descendant's business
                if (st[e][k] != 0) continue;
                if (g.edges[e].weights[k] == hv[e][k]) {
                    cand_ix[e][k] = (int)cands.size();
                    cands.emplace_back(e, k);
                } else {
                    st[e][k] = 2;  // dominated
                }
            }
        }

        multigraph gs;
        degree_constraint fs;
        std::vector<int> hnode(nc, -1);
        // per candidate, the mapped endpoints (filled below)
        std::vector<std::pair<int, int>> cend(cands.size(), {-1, -1});
        for (int ci = 0; ci < nc; ci++) {
            int c = nd.children[ci];
            if (wf.nodes[c].vertex >= 0) {
                int x = wf.nodes[c].vertex;
                if (rd[x] < 0) return std::nullopt;
                hnode[ci] = gs.n++;
                fs.f.push_back(rd[x]);
            }
        }
        // leaf endpoints map straight to their node
        for (int ci2 = 0; ci2 < (int)cands.size(); ci2++) {
            auto [e, k] = cands[ci2];
            (void)k;
            const edge& ed = g.edges[e];
            if (wf.nodes[nd.children[child_of[ed.u]]].vertex >= 0)
                cend[ci2].first = hnode[child_of[ed.u]];
            if (wf.nodes[nd.children[child_of[ed.v]]].vertex >= 0)
                cend[ci2].second = hnode[child_of[ed.v]];
        }
        // contracted children become gadgets metering boundary use
        for (int ci = 0; ci < nc; ci++) {
            int A = nd.children[ci];
            if (wf.nodes[A].vertex >= 0) continue;
            const std::vector<char>& va = inset(A, n);
            int slots_used = 0;
            std::vector<std::pair<int, char>> attach;  // (candidate, in I(A))
            for (int e = 0; e < (int)g.edges.size(); e++) {
                const edge& ed = g.edges[e];
                bool au = va[ed.u], av = va[ed.v];
                if (au == av) continue;
                int innerv = au ? ed.u : ed.v;
                const std::vector<char>& flag = au ? wf.iu[e] : wf.iv[e];
                (void)innerv;
                for (int k = 0; k < ed.mult(); k++) {
                    if (st[e][k] == 1) {
                        if (!flag[k]) slots_used++;
                    } else if (st[e][k] == 2) {
                        if (flag[k]) slots_used++;
                    } else {
                        if (cand_ix[e][k] < 0) return std::nullopt;  // stale boundary
                        attach.emplace_back(cand_ix[e][k], flag[k]);
                    }
                }
            }
            int budget = va[v] ? 0 : 1;
            int fb = budget - slots_used;
            if (fb < 0) return std::nullopt;
            int a = gs.n++, b = gs.n++, c2 = gs.n++;
            fs.f.push_back(1);   // a
            fs.f.push_back(fb);  // b
            fs.f.push_back(1);   // c
            gs.add_edge(a, c2, {0});
            gs.add_edge(b, c2, {0});
            for (auto [cix, ini] : attach) {
                if (ini) {
                    int ak = gs.n++;
                    fs.f.push_back(1);
                    gs.add_edge(a, ak, {0});
                    auto [e, k] = cands[cix];
                    const edge& ed = g.edges[e];
                    if (va[ed.u])
                        cend[cix].first = ak;
                    else
                        cend[cix].second = ak;
                } else {
                    auto [e, k] = cands[cix];
                    const edge& ed = g.edges[e];
                    if (va[ed.u])
                        cend[cix].first = b;
                    else
                        cend[cix].second = b;
                }
            }
        }
        int gadget_records = (int)gs.edges.size();
        for (int ci2 = 0; ci2 < (int)cands.size(); ci2++) {
            if (cend[ci2].first == -1 || cend[ci2].second == -1) return std::nullopt;
            gs.add_edge(cend[ci2].first, cend[ci2].second, {0});
        }

        factor_result sol = find_general_factor(gs, fs, fld, r);
        if (!sol.found) return std::nullopt;
        std::vector<char> picked(cands.size(), 0);
        for (auto [ge, gk] : sol.factor.picks) {
            (void)gk;
            if (ge >= gadget_records) picked[ge - gadget_records] = 1;
        }
        for (int ci2 = 0; ci2 < (int)cands.size(); ci2++) {
            auto [e, k] = cands[ci2];
            if (picked[ci2])
                take(e, k);
            else
                st[e][k] = 2;
        }
        for (int c : nd.children)
            if (wf.nodes[c].vertex < 0) stack.push_back(c);
    }

    edge_subset out;
    for (int e = 0; e < (int)g.edges.size(); e++)
        for (int k = 0; k < g.edges[e].mult(); k++)
            if (st[e][k] == 1) out.add(e, k);
    std::vector<int> d = degree_vector(g, out);
    for (int x = 0; x < n; x++)
        if (d[x] != f.f[x] + (x == v ? dir : 0)) return std::nullopt;
    return out;
}

bool verify_perturbation(const multigraph& g, const degree_constraint& f,
                         const blossom_forest& wf, const edge_subset& m, int v, int dir,
                         std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!wf.ok || !wf.ib_done) return fail("forest not built");
    std::string w;
    if (!m.valid(g, &w)) return fail("perturbation invalid: " + w);

    std::vector<int> d = degree_vector(g, m);
    for (int x = 0; x < g.n; x++)
        if (d[x] != f.f[x] + (x == v ? dir : 0))
            return fail("degree off at vertex " + std::to_string(x));

    for (int id = g.n; id < (int)wf.nodes.size(); id++)
        if (id != wf.root && wf.z[id] < 0) return fail("negative z off the root");

    std::vector<std::vector<char>> picked(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); e++) picked[e].assign(g.edges[e].mult(), 0);
    for (auto [e, k] : m.picks) picked[e][k] = 1;

    for (int e = 0; e < (int)g.edges.size(); e++)
        for (int k = 0; k < g.edges[e].mult(); k++) {
            int64_t hz = hat_yz(wf, g, e, k);
            if (picked[e][k] && g.edges[e].weights[k] < hz)
                return fail("copy in the perturbation below its dual value at edge " +
                            std::to_string(e));
            if (!picked[e][k] && g.edges[e].weights[k] > hz)
                return fail("strictly underrated copy left out at edge " +
                            std::to_string(e));
        }

    inset_cache inset(wf, g.n);
    for (int id = g.n; id < (int)wf.nodes.size(); id++) {
        if (wf.root_artificial && id == wf.root) continue;
        const std::vector<char>& vb = inset(id, g.n);
        long diff = 0;
        for (int e = 0; e < (int)g.edges.size(); e++) {
            const edge& ed = g.edges[e];
            if ((bool)vb[ed.u] == (bool)vb[ed.v]) continue;
            const std::vector<char>& flag = vb[ed.u] ? wf.iu[e] : wf.iv[e];
            for (int k = 0; k < ed.mult(); k++)
                if ((bool)picked[e][k] != (bool)flag[k]) diff++;
        }
        long want = vb[v] ? 0 : 1;
        if (diff != want)
            return fail("blossom boundary not respected at node " + std::to_string(id));
    }
    return true;
}

ffactor_instance ffactor_closure(const multigraph& g, const degree_constraint& f) {
    ffactor_instance out;
    // f=0 vertices can carry no factor edge and cannot be lowered; drop them.
    out.vmap.assign(g.n, -1);
    for (int v = 0; v < g.n; v++)
        if (f.f[v] > 0) {
            out.vmap[v] = out.g.n++;
            out.f.f.push_back(f.f[v]);
        }
    out.s = out.g.n++;
    out.f.f.push_back(1);
    for (int e = 0; e < (int)g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        if (out.vmap[ed.u] < 0 || out.vmap[ed.v] < 0) continue;
        for (int k = 0; k < ed.mult(); k++) {
            out.g.add_edge(out.vmap[ed.u], out.vmap[ed.v], {ed.weights[k]});
            out.from.emplace_back(e, k);
        }
    }
    // two parallel apex copies where f allows: F^s needs a pair at one vertex
    // when the factor is all loops
    for (int v = 0; v < g.n; v++) {
        if (f.f[v] == 0) continue;
        int cnt = std::min(2, f.f[v]);
        out.g.add_edge(out.s, out.vmap[v], std::vector<int64_t>(cnt, 0));
        out.from.emplace_back(-1, -1);
    }
    return out;
}

general_weighted_result max_weight_general_factor(const multigraph& g,
                                                  const degree_constraint& f, rng& r) {
    general_weighted_result res;
    ffactor_instance inst = ffactor_closure(g, f);
    res.s = inst.s;
    res.vmap = inst.vmap;
    res.closure = inst.g;
    res.closure_f = inst.f;
    if (inst.g.n == 1) {  // everything dropped: the empty factor
        res.found = true;
        return res;
    }

    long phi = inst.f.phi();
    long nc = inst.g.n;
    long bound = 4 * (inst.g.max_abs_weight() + 1) * (2 * phi + nc + 6);

    for (int attempt = 0; attempt < solve_max_retries; attempt++) {
        res.retries = attempt;
        field fld = choose_field(2 * phi + nc + 4, bound, r);

        if (!has_factor(inst.g, perturb_lower(inst.f, inst.s), fld, r)) {
            if (attempt == 0) return res;  // no f-factor
            continue;
        }
        perturb_result lo = lower_weights(inst.g, inst.f, fld, r);
        perturb_result hi = upper_weights(inst.g, inst.f, fld, r);
        if (!lo.ok || !hi.ok) continue;
        zeta_tables zt = edge_zetas(inst.g, lo, hi);
        if (!zt.ok) continue;
        blossom_forest wf = find_vb_sets(inst.g, zt, lo.w);
        if (!wf.ok) continue;
        if (!find_ib_sets(inst.g, inst.f, zt, wf)) continue;

        auto m = extract_perturbation(inst.g, inst.f, wf, inst.s, -1, fld, r);
        if (!m) continue;
        if (!verify_perturbation(inst.g, inst.f, wf, *m, inst.s, -1)) continue;

        bool clean = true;
        for (auto [e, k] : m->picks) {
            (void)k;
            clean &= inst.from[e].first >= 0;
        }
        if (!clean) continue;  // F_s must leave the apex isolated

        res.found = true;
        res.forest = std::move(wf);
        res.weight = 0;
        for (auto [e, k] : m->picks) {
            auto [se, sk] = inst.from[e];
            (void)k;
            res.factor.add(se, sk);
            res.weight += g.edges[se].weights[sk];
        }
        return res;
    }
    res.gave_up = true;
    return res;
}

}  // namespace fct
