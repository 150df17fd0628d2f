#include "factor/weighted_bipartite.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace fct {

bipartite_duals_result bipartite_duals(const multigraph& g, const degree_constraint& f,
                                       const std::vector<int>& side, const field& fld,
                                       rng& r) {
    bipartite_duals_result out;
    if (!has_factor(g, f, fld, r)) return out;

    long f1 = 0;
    for (int v = 0; v < g.n; v++)
        if (side[v] == 1) f1 += f(v);

    perturb_result pw;
    if (f1 > 0) {
        // with a factor and positive demand the augmented determinant is not
        // identically zero, so a failure here is bad sampling
        pw = bipartite_lower_weights(g, f, side, fld, r);
        if (!pw.ok) {
            out.gave_up = true;
            return out;
        }
    }

    int64_t big = g.max_abs_weight() * (f.phi() + 2) + 1;
    out.y.assign(g.n, 0);
    for (int v = 0; v < g.n; v++) {
        if (side[v] != 1) continue;
        if (f(v) == 0) {
            out.y[v] = big;
        } else if (pw.w[v] == weight_neg_inf) {
            out.gave_up = true;  // same: the adjoint entry cannot vanish
            return out;
        } else {
            out.y[v] = -pw.w[v];
        }
    }

    std::vector<std::vector<int64_t>> cand(g.n);
    for (const edge& e : g.edges) {
        int u = side[e.u] == 0 ? e.u : e.v;
        int v = e.other(u);
        for (int64_t w0 : e.weights) cand[u].push_back(w0 - out.y[v]);
    }
    for (int u = 0; u < g.n; u++) {
        if (side[u] != 0) continue;
        auto& c = cand[u];
        std::sort(c.begin(), c.end(), std::greater<>());
        if (f(u) == 0) {
            // no factor copy here; pick the value that makes the best edge
            // tight and the rest dominated
            out.y[u] = c.empty() ? 0 : c[0];
        } else {
            // a factor uses f(u) copies at u, so this many candidates exist
            assert((long)c.size() >= f(u));
            out.y[u] = c[f(u) - 1];
        }
    }
    out.found = true;
    return out;
}

std::optional<edge_subset> extract_from_duals(const multigraph& g, const degree_constraint& f,
                                              const std::vector<int>& side,
                                              const std::vector<int64_t>& y, const field& fld,
                                              rng& r) {
    edge_subset forced;
    multigraph tight;
    tight.n = g.n;
    std::vector<std::vector<std::pair<int, int>>> back;  // tight copy -> copy of g
    std::vector<int> fp(g.n);
    for (int v = 0; v < g.n; v++) fp[v] = f(v);

    for (int ei = 0; ei < (int)g.edges.size(); ei++) {
        const edge& e = g.edges[ei];
        std::vector<int64_t> tw;
        std::vector<std::pair<int, int>> tb;
        for (int k = 0; k < e.mult(); k++) {
            int64_t slack = y[e.u] + y[e.v] - e.weights[k];
            if (slack < 0) {
                forced.add(ei, k);
                fp[e.u]--;
                fp[e.v]--;
            } else if (slack == 0) {
                tw.push_back(e.weights[k]);
                tb.emplace_back(ei, k);
            }
        }
        if (!tw.empty()) {
            tight.add_edge(e.u, e.v, std::move(tw));
            back.push_back(std::move(tb));
        }
    }
    for (int v = 0; v < g.n; v++)
        if (fp[v] < 0) return std::nullopt;

    degree_constraint fpc;
    fpc.f = std::move(fp);
    factor_result t = find_bipartite_factor(tight, fpc, side, fld, r);
    if (!t.found) return std::nullopt;

    edge_subset out = forced;
    for (auto [te, tk] : t.factor.picks) out.add(back[te][tk].first, back[te][tk].second);
    return out;
}

int64_t bipartite_dual_objective(const multigraph& g, const degree_constraint& f,
                                 const std::vector<int64_t>& y) {
    int64_t obj = 0;
    for (int v = 0; v < g.n; v++) obj += (int64_t)f(v) * y[v];
    for (const edge& e : g.edges)
        for (int64_t w0 : e.weights) {
            int64_t slack = y[e.u] + y[e.v] - w0;
            if (slack < 0) obj -= slack;
        }
    return obj;
}

bool check_bipartite_certificate(const multigraph& g, const degree_constraint& f,
                                 const edge_subset& fac, const std::vector<int64_t>& y,
                                 std::string* why) {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if ((int)y.size() != g.n) return fail("dual vector size mismatch");
    if (!fac.valid(g, why)) return false;
    if (!is_factor(g, f, fac)) return fail("degrees do not match f");

    std::vector<std::vector<char>> in(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); e++) in[e].assign(g.edges[e].mult(), 0);
    for (auto [e, k] : fac.picks) in[e][k] = 1;

    for (size_t e = 0; e < g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        for (int k = 0; k < ed.mult(); k++) {
            int64_t slack = y[ed.u] + y[ed.v] - ed.weights[k];
            if (in[e][k] && slack > 0) return fail("factor copy not underrated");
            if (!in[e][k] && slack < 0) return fail("outside copy not dominated");
        }
    }
    if (subset_weight(g, fac) != bipartite_dual_objective(g, f, y))
        return fail("weight differs from the dual objective");
    return true;
}

weighted_factor_result max_weight_bipartite_factor(const multigraph& g,
                                                   const degree_constraint& f,
                                                   const std::vector<int>& side, rng& r) {
    weighted_factor_result out;
    long f0 = 0;
    for (int v = 0; v < g.n; v++)
        if (side[v] == 0) f0 += f(v);
    // covers the degree bound of the augmented matrix with room to spare
    long bound = 4 * (g.max_abs_weight() + 1) * (f0 + 2);

    for (int attempt = 0; attempt < solve_max_retries; attempt++) {
        out.retries = attempt;
        field fld = choose_field(f.phi() + 2, bound, r);
        auto d = bipartite_duals(g, f, side, fld, r);
        if (!d.found && !d.gave_up) return out;  // no factor
        if (d.gave_up) continue;
        auto ex = extract_from_duals(g, f, side, d.y, fld, r);
        if (!ex) continue;
        if (!check_bipartite_certificate(g, f, *ex, d.y)) continue;
        out.found = true;
        out.factor = std::move(*ex);
        out.y = std::move(d.y);
        out.weight = subset_weight(g, out.factor);
        return out;
    }
    out.gave_up = true;
    return out;
}

}  // namespace fct
