#include "factor/factor_solve.hpp"

#include <algorithm>

#include "factor/linalg.hpp"

namespace fct {

bool has_factor(const multigraph& g, const degree_constraint& f, const field& fld,
                rng& r, int trials) {
    for (int t = 0; t < trials; t++) {
        factor_matrix fm = build_general(g, f, fld, false, r);
        if (det(fld, fm.eval(1)) != 0) return true;
    }
    return false;
}

namespace {

enum class attempt_status { ok, singular, stuck };

struct attempt_result {
    attempt_status status;
    edge_subset factor;
};

attempt_result bipartite_attempt(const multigraph& g, const degree_constraint& f,
                                 const std::vector<int>& side, const field& fld, rng& r) {
    factor_matrix fm = build_bipartite(g, f, side, fld, false, r);
    if (fm.degenerate) return {attempt_status::singular, {}};
    if (fm.order == 0) {
        edge_subset empty;
        if (is_factor(g, f, empty)) return {attempt_status::ok, empty};
        return {attempt_status::singular, {}};
    }
    auto inv = invert(fld, fm.eval(1));
    if (!inv) return {attempt_status::singular, {}};
    matrix N = *inv;  // N.at(a, b): a indexes side-1 slots, b side-0 slots

    std::vector<std::vector<int>> inc(g.n);
    for (size_t e = 0; e < g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        inc[side[ed.u] == 0 ? ed.u : ed.v].push_back((int)e);
    }
    std::vector<char> live0(fm.order, 1), live1(fm.order, 1);
    std::vector<int> used(g.edges.size(), 0);
    edge_subset F;

    for (int i = 0; i < g.n; i++) {
        if (side[i] != 0) continue;
        for (int slot = 0; slot < f(i); slot++) {
            int R = fm.row(i, slot);
            int pick_e = -1, pick_c = -1;
            for (int e : inc[i]) {
                if (used[e] >= g.edges[e].mult()) continue;
                int j = g.edges[e].other(i);
                for (int rho = 0; rho < f(j); rho++) {
                    int C = fm.col(j, rho);
                    if (live1[C] && N.at(C, R) != 0) {
                        pick_e = e;
                        pick_c = C;
                        break;
                    }
                }
                if (pick_e >= 0) break;
            }
            if (pick_e < 0) return {attempt_status::stuck, {}};
            F.add(pick_e, used[pick_e]);
            used[pick_e]++;
            uint64_t pivinv = fld.inv(N.at(pick_c, R));
            for (size_t a = 0; a < fm.order; a++) {
                if (!live1[a] || a == (size_t)pick_c || N.at(a, R) == 0) continue;
                uint64_t fac = fld.mul(N.at(a, R), pivinv);
                for (size_t b = 0; b < fm.order; b++) {
                    if (!live0[b]) continue;
                    N.at(a, b) = fld.sub(N.at(a, b), fld.mul(fac, N.at(pick_c, b)));
                }
            }
            live1[pick_c] = 0;
            live0[R] = 0;
        }
    }
    if (!is_factor(g, f, F)) return {attempt_status::stuck, {}};
    return {attempt_status::ok, F};
}

attempt_result general_attempt(const multigraph& g, const degree_constraint& f,
                               const field& fld, rng& r) {
    factor_matrix fm = build_general(g, f, fld, false, r);
    std::vector<std::vector<char>> gone(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); e++) {
        gone[e].assign(g.edges[e].mult(), 0);
        // copies with no matrix support (f = 0 endpoint, loop at f = 1) are
        // unusable and start out deleted
        for (int k = 0; k < g.edges[e].mult(); k++)
            if (fm.per_edge[e][k].x.empty() || fm.per_edge[e][k].y.empty()) gone[e][k] = 1;
    }
    edge_subset F;
    if (fm.order == 0) {
        if (is_factor(g, f, F)) return {attempt_status::ok, F};
        return {attempt_status::singular, {}};
    }
    auto inv = invert(fld, fm.eval(1));
    if (!inv) return {attempt_status::singular, {}};
    matrix N = *inv;

    for (size_t e = 0; e < g.edges.size(); e++) {
        const edge& ed = g.edges[e];
        auto remaining = [&] {
            int c = 0;
            for (char x : gone[e]) c += !x;
            return c;
        };
        // up to all copies can be removable; unpruned multiplicity may exceed
        // what any factor can use
        int cap = remaining();
        if (cap < 1) continue;
        int mu = 1;
        while (2 * mu <= cap) mu *= 2;
        for (; mu >= 1; mu /= 2) {
            if (mu > remaining()) continue;
            std::vector<std::pair<int, int>> batch;
            for (int k = 0; k < ed.mult() && (int)batch.size() < mu; k++)
                if (!gone[e][k]) batch.push_back({(int)e, k});
            auto [U, V] = fm.removal_uv(batch, 1);
            auto upd = smw_update(fld, N, U, V);
            if (upd) {
                N = *upd;
                for (auto [ee, k] : batch) gone[ee][k] = 1;
            }
        }
    }
    for (size_t e = 0; e < g.edges.size(); e++)
        for (int k = 0; k < g.edges[e].mult(); k++)
            if (!gone[e][k]) F.add((int)e, k);
    if (!is_factor(g, f, F)) return {attempt_status::stuck, {}};
    return {attempt_status::ok, F};
}

template <class Attempt>
factor_result solve_with_retries(Attempt&& attempt) {
    factor_result res;
    for (int att = 0; att < solve_max_retries; att++) {
        attempt_result a = attempt();
        res.retries = att;
        if (a.status == attempt_status::ok) {
            res.found = true;
            res.factor = a.factor;
            return res;
        }
        // a singular first build means no factor (one-sided); later attempts
        // already saw a nonsingular matrix, so keep trying
        if (a.status == attempt_status::singular && att == 0) return res;
    }
    res.retries = solve_max_retries;
    res.gave_up = true;
    return res;
}

}  // namespace

factor_result find_bipartite_factor(const multigraph& g, const degree_constraint& f,
                                    const std::vector<int>& side, const field& fld, rng& r) {
    return solve_with_retries([&] { return bipartite_attempt(g, f, side, fld, r); });
}

factor_result find_general_factor(const multigraph& g, const degree_constraint& f,
                                  const field& fld, rng& r) {
    return solve_with_retries([&] { return general_attempt(g, f, fld, r); });
}

}  // namespace fct
