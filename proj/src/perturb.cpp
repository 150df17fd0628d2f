#include "factor/perturb.hpp"

#include <algorithm>
#include <cassert>

#include "factor/linalg.hpp"

namespace fct {

field choose_field(long phi, long degree_bound, rng& r) {
    uint64_t lo = 1ULL << 31;
    uint64_t p3 = phi > 0 ? (uint64_t)phi * (uint64_t)phi * (uint64_t)phi : 0;
    lo = std::max(lo, p3);
    lo = std::max(lo, (uint64_t)degree_bound + 2);
    return field(random_prime(lo, 2 * lo, r));
}

namespace {

degree_constraint plain(const degree_constraint& f) {
    degree_constraint g;
    g.f.resize(f.f.size());
    for (size_t v = 0; v < f.f.size(); v++) g.f[v] = f((int)v);
    return g;
}

// Reads the adjoint column at (t,0) and converts entry degrees to unshifted
// perturbed-factor weights. a_index[v] locates a_v in the adjoint column
// (slot position), -1 when v has none.
perturb_result read_adjoint(const factor_matrix& fm, const field& fld, rng& r,
                            long phi_aug, const std::vector<int>& a_index, int t) {
    perturb_result res;
    res.w.assign(a_index.size(), weight_neg_inf);
    if (fm.degenerate) return res;
    assert(fld.p > (uint64_t)fm.degree_bound() + 1);
    poly_eval pe = fm.poly();
    long dd = poly_det_degree(fld, pe, r);
    if (dd < 0) return res;  // identically zero: not critical as required
    if (!fm.bipartite && dd % 2 != 0) {
        res.unlucky = true;
        return res;
    }
    int64_t W = fm.weight_shift;
    // every factor of the augmented graph uses this many copies, each shifted
    // up by W
    int64_t factor_edges = fm.bipartite ? (int64_t)fm.order : phi_aug / 2;
    res.base = (fm.bipartite ? dd : dd / 2) - W * factor_edges;

    adjoint_degrees ad = poly_adjoint_column_degrees(fld, pe, (size_t)fm.row(t, 0), r);
    if (!ad.ok) {
        res.unlucky = true;
        return res;
    }
    for (size_t v = 0; v < a_index.size(); v++) {
        if (a_index[v] < 0) continue;
        long dv = ad.deg[(size_t)a_index[v]];
        if (dv < 0) continue;
        if (fm.bipartite) {
            // a_v ranges over f_v-factors of the closed graph: one copy per
            // original side-0 slot
            res.w[v] = dv - W * (factor_edges - 1);
        } else {
            // a_v pairs a perturbed factor with a maximum one, both shifted
            res.w[v] = dv - dd / 2 - W * factor_edges + W;
        }
    }
    res.ok = true;
    return res;
}

}  // namespace

perturb_result lower_weights(const multigraph& g_plus, const degree_constraint& f,
                             const field& fld, rng& r) {
    int n = g_plus.n;
    multigraph aug = g_plus;
    aug.n = n + 1;
    int t = n;
    for (int v = 0; v < n; v++) aug.add_edge(t, v, {0});
    degree_constraint faug = plain(f);
    faug.f.push_back(1);

    factor_matrix fm = build_general(aug, faug, fld, true, r);
    std::vector<int> a_index(n, -1);
    // Deleting v's middle slot: loop positions live in the block
    // [0, floor(f/2)) x [ceil(f/2), f), and dropping slot floor(f/2) keeps
    // min(#rows, #cols) at floor((f-1)/2), the loop capacity of the lowered
    // vertex. An end slot would undercount loops whenever f is odd.
    for (int v = 0; v < n; v++)
        if (faug.f[v] > 0) a_index[v] = fm.row(v, faug.f[v] / 2);
    return read_adjoint(fm, fld, r, faug.phi(), a_index, t);
}

perturb_result upper_weights(const multigraph& g_plus, const degree_constraint& f,
                             const field& fld, rng& r) {
    int n = g_plus.n;
    multigraph aug = g_plus;
    aug.n = 2 * n + 1;
    int t = 2 * n;
    for (int u = 0; u < n; u++) {
        aug.add_edge(u, n + u, {0});  // pendant t_u
        aug.add_edge(t, n + u, {0});
    }
    degree_constraint faug = plain(f);
    for (int u = 0; u < n; u++) faug.f[u] += 1;
    faug.f.resize(2 * n + 1, 1);

    factor_matrix fm = build_general(aug, faug, fld, true, r);
    std::vector<int> a_index(n, -1);
    // the adjoint entry for v sits at pendant t_v's single slot
    for (int v = 0; v < n; v++) a_index[v] = fm.row(n + v, 0);
    return read_adjoint(fm, fld, r, faug.phi(), a_index, t);
}

perturb_result bipartite_lower_weights(const multigraph& g, const degree_constraint& f,
                                       const std::vector<int>& side, const field& fld,
                                       rng& r) {
    int n = g.n;
    multigraph aug = g;
    aug.n = n + 2;
    int s = n, t = n + 1;
    for (int u = 0; u < n; u++)
        if (side[u] == 0) aug.add_edge(s, u, {0});
    for (int v = 0; v < n; v++)
        if (side[v] == 1) aug.add_edge(t, v, {0});
    degree_constraint faug = plain(f);
    faug.f.push_back(1);  // s
    faug.f.push_back(1);  // t
    std::vector<int> side_aug = side;
    side_aug.push_back(1);
    side_aug.push_back(0);

    factor_matrix fm = build_bipartite(aug, faug, side_aug, fld, true, r);
    std::vector<int> a_index(n, -1);
    if (!fm.degenerate)
        for (int v = 0; v < n; v++)
            if (side[v] == 1 && faug.f[v] > 0) a_index[v] = fm.col(v, 0);
    return read_adjoint(fm, fld, r, faug.phi(), a_index, t);
}

}  // namespace fct
