#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "factor/factor_solve.hpp"
#include "factor/oracle.hpp"

using namespace fct;

namespace {

const field F{4611686018427387847ULL};

degree_constraint uniform(int n, int k) {
    degree_constraint f;
    f.f.assign(n, k);
    return f;
}

multigraph random_graph(rng& r, int n, int max_mult, bool loops) {
    multigraph g;
    g.n = n;
    for (int u = 0; u < n; u++)
        for (int v = loops ? u : u + 1; v < n; v++) {
            if (r.below(3) == 0) continue;
            g.add_edge(u, v, std::vector<int64_t>(1 + r.below(max_mult), 0));
        }
    return g;
}

}  // namespace

TEST_CASE("factor existence") {
    rng r(11);
    multigraph path;
    path.n = 3;
    path.add_edge(0, 1, {0});
    path.add_edge(1, 2, {0});
    CHECK(!has_factor(path, uniform(3, 1), F, r));

    multigraph tri;
    tri.n = 3;
    tri.add_edge(0, 1, {0});
    tri.add_edge(1, 2, {0});
    tri.add_edge(0, 2, {0});
    CHECK(has_factor(tri, uniform(3, 2), F, r));

    // odd total degree can never be met
    degree_constraint odd;
    odd.f = {2, 1};
    multigraph k2;
    k2.n = 2;
    k2.add_edge(0, 1, {0});
    CHECK(!has_factor(k2, odd, F, r));
}

TEST_CASE("bipartite extraction fixtures") {
    rng r(12);
    multigraph k2;
    k2.n = 2;
    k2.add_edge(0, 1, {0});
    auto res = find_bipartite_factor(k2, uniform(2, 1), {0, 1}, F, r);
    REQUIRE(res.found);
    CHECK(res.factor.picks == std::vector<std::pair<int, int>>{{0, 0}});

    multigraph c4;
    c4.n = 4;
    c4.add_edge(0, 1, {0});
    c4.add_edge(1, 2, {0});
    c4.add_edge(2, 3, {0});
    c4.add_edge(3, 0, {0});
    auto rc = find_bipartite_factor(c4, uniform(4, 1), {0, 1, 0, 1}, F, r);
    REQUIRE(rc.found);
    CHECK(is_factor(c4, uniform(4, 1), rc.factor));

    multigraph dbl;
    dbl.n = 2;
    dbl.add_edge(0, 1, {0, 0});
    auto rd = find_bipartite_factor(dbl, uniform(2, 2), {0, 1}, F, r);
    REQUIRE(rd.found);
    CHECK(rd.factor.size() == 2);
    CHECK(is_factor(dbl, uniform(2, 2), rd.factor));

    multigraph path;
    path.n = 4;
    path.add_edge(0, 1, {0});
    path.add_edge(1, 2, {0});
    auto rn = find_bipartite_factor(path, uniform(4, 1), {0, 1, 0, 1}, F, r);
    CHECK(!rn.found);
    CHECK(!rn.gave_up);
}

TEST_CASE("general extraction fixtures") {
    rng r(13);
    multigraph tri;
    tri.n = 3;
    tri.add_edge(0, 1, {0});
    tri.add_edge(1, 2, {0});
    tri.add_edge(0, 2, {0});
    auto rt = find_general_factor(tri, uniform(3, 2), F, r);
    REQUIRE(rt.found);
    CHECK(rt.factor.size() == 3);  // nothing removable

    multigraph k4;
    k4.n = 4;
    for (int u = 0; u < 4; u++)
        for (int v = u + 1; v < 4; v++) k4.add_edge(u, v, {0});
    auto rk = find_general_factor(k4, uniform(4, 1), F, r);
    REQUIRE(rk.found);
    CHECK(rk.factor.size() == 2);
    CHECK(is_factor(k4, uniform(4, 1), rk.factor));

    // loop doubled at v, pendant to a dead-end u: one loop copy survives
    multigraph lg;
    lg.n = 2;
    lg.add_edge(0, 0, {0, 0});
    lg.add_edge(0, 1, {0});
    degree_constraint f;
    f.f = {2, 0};
    auto rl = find_general_factor(lg, f, F, r);
    REQUIRE(rl.found);
    REQUIRE(rl.factor.size() == 1);
    CHECK(rl.factor.picks[0].first == 0);
}

TEST_CASE("solvers agree with enumeration on random multigraphs") {
    rng r(14);
    int found_gen = 0, found_bip = 0;
    for (int iter = 0; iter < 120; iter++) {
        multigraph g = random_graph(r, 2 + (int)r.below(5), 3, true);
        degree_constraint f;
        long phi = 0;
        for (int v = 0; v < g.n; v++) {
            f.f.push_back((int)r.below(4));
            phi += f.f.back();
        }
        if (phi > 14) continue;
        bool want = !enumerate_factors(g, f).empty();
        auto res = find_general_factor(g, f, F, r);
        CHECK(!res.gave_up);
        CHECK(res.found == want);
        if (res.found) {
            CHECK(res.factor.valid(g));
            CHECK(is_factor(g, f, res.factor));
            found_gen++;
        }
    }
    CHECK(found_gen > 15);

    for (int iter = 0; iter < 320; iter++) {
        int n = 2 + (int)r.below(5);
        std::vector<int> side;
        for (int v = 0; v < n; v++) side.push_back((int)r.below(2));
        multigraph g;
        g.n = n;
        for (int u = 0; u < n; u++)
            for (int v = u + 1; v < n; v++) {
                if (side[u] == side[v] || r.below(3) == 0) continue;
                g.add_edge(u, v, std::vector<int64_t>(1 + r.below(3), 0));
            }
        degree_constraint f;
        long phi = 0;
        for (int v = 0; v < n; v++) {
            f.f.push_back((int)r.below(3));
            phi += f.f.back();
        }
        if (phi > 14) continue;
        bool want = !enumerate_factors(g, f).empty();
        auto res = find_bipartite_factor(g, f, side, F, r);
        CHECK(!res.gave_up);
        CHECK(res.found == want);
        if (res.found) {
            CHECK(res.factor.valid(g));
            CHECK(is_factor(g, f, res.factor));
            found_bip++;
        }
    }
    CHECK(found_bip > 15);
}

TEST_CASE("removability is monotone in the copy count") {
    rng r(15);
    for (int iter = 0; iter < 30; iter++) {
        multigraph g = random_graph(r, 2 + (int)r.below(3), 3, true);
        if (g.edges.empty()) continue;
        degree_constraint f;
        for (int v = 0; v < g.n; v++) f.f.push_back((int)r.below(4));
        int e = (int)r.below(g.edges.size());
        int mu = g.edges[e].mult();
        // feasible after removing k copies, checked by enumeration
        std::vector<bool> feas;
        for (int k = 0; k <= mu; k++) {
            multigraph h = g;
            h.edges[e].weights.resize(mu - k);
            if (h.edges[e].weights.empty()) h.edges.erase(h.edges.begin() + e);
            feas.push_back(!enumerate_factors(h, f).empty());
        }
        for (int k = 1; k <= mu; k++)
            if (feas[k]) CHECK(feas[k - 1]);
    }
}
