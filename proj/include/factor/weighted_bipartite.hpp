#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "factor/factor_solve.hpp"
#include "factor/perturb.hpp"

namespace fct {

struct bipartite_duals_result {
    bool found = false;    // false without gave_up: the instance has no factor
    bool gave_up = false;  // sampling trouble, retry with a fresh field
    std::vector<int64_t> y;
};

// Optimal duals. Side-1 vertices get minus the maximum factor weight of the
// closed graph with their constraint lowered by one (the sign matters: with
// parallel copies the unnegated value fails complementary slackness);
// side-0 vertices get the largest
// value that still leaves f(u) incident copies underrated (the f(u)-th
// largest of w(uv,k) - y(v), an exact order statistic). Vertices with
// f(v) = 0 on side 1 get a value high enough to dominate all their edges.
bipartite_duals_result bipartite_duals(const multigraph& g, const degree_constraint& f,
                                       const std::vector<int>& side, const field& fld,
                                       rng& r);

// Strictly underrated copies are forced in; the rest is an f'-factor among
// tight copies, f'(v) = f(v) - (forced copies at v). nullopt when the inner
// solve fails or the duals are inconsistent: retry upstream.
std::optional<edge_subset> extract_from_duals(const multigraph& g, const degree_constraint& f,
                                              const std::vector<int>& side,
                                              const std::vector<int64_t>& y, const field& fld,
                                              rng& r);

// Dual objective: sum f(v)y(v) plus the total slack of strictly underrated
// copies. Lower-bounds every factor weight; equality certifies optimality.
int64_t bipartite_dual_objective(const multigraph& g, const degree_constraint& f,
                                 const std::vector<int64_t>& y);

// Every copy outside the factor dominated, every factor copy underrated or
// tight, degrees exact, weight equal to the dual objective. All-integer.
bool check_bipartite_certificate(const multigraph& g, const degree_constraint& f,
                                 const edge_subset& fac, const std::vector<int64_t>& y,
                                 std::string* why = nullptr);

struct weighted_factor_result {
    bool found = false;
    bool gave_up = false;
    edge_subset factor;
    std::vector<int64_t> y;
    int64_t weight = 0;
    int retries = 0;
};

// Full pipeline: duals, extraction, certificate, retrying with fresh
// randomness on any failure. A returned factor is certified maximum.
weighted_factor_result max_weight_bipartite_factor(const multigraph& g,
                                                   const degree_constraint& f,
                                                   const std::vector<int>& side, rng& r);

}  // namespace fct
