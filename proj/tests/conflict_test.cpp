// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <bit>
#include <vector>

#include "prophet/conflict.hpp"
#include "prophet/errors.hpp"
#include "prophet/instance.hpp"
#include "prophet/rng.hpp"

namespace prophet {
namespace {

ConflictGraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  ConflictSpec c;
  c.edges = edges;
  return build_graph(canonical_conflicts(c, identity_arrivals(n)), n);
}

int brute_alpha(const ConflictGraph& g, const std::vector<int>& s) {
  int best = 0;
  for (std::uint32_t m = 0; m < (1u << s.size()); ++m) {
    bool ok = true;
    for (std::size_t a = 0; a < s.size() && ok; ++a) {
      for (std::size_t b = a + 1; b < s.size() && ok; ++b) {
        if ((m >> a & 1) && (m >> b & 1) && g.adjacent(s[a], s[b])) ok = false;
      }
    }
    if (ok) best = std::max(best, std::popcount(m));
  }
  return best;
}

TEST(Conflict, AlphaOfPathAndClique) {
  const auto path = graph_from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  EXPECT_EQ(path.alpha({0, 1, 2, 3, 4}), 3);
  const auto clique = graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(clique.alpha({0, 1, 2, 3}), 1);
  EXPECT_EQ(clique.d2(), 1);
  EXPECT_EQ(path.alpha({}), 0);
}

TEST(Conflict, AlphaMatchesExhaustiveSearch) {
  Rng rng(17);
  for (int round = 0; round < 200; ++round) {
    const int n = 1 + static_cast<int>(rng.below(12));
    std::vector<std::pair<int, int>> edges;
    const double p = rng.uniform();
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (rng.uniform() < p) edges.emplace_back(u, v);
      }
    }
    const auto g = graph_from_edges(n, edges);
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[i] = i;
    EXPECT_EQ(g.alpha(all), brute_alpha(g, all));
  }
}

TEST(Conflict, AlphaGuard) {
  const auto g = graph_from_edges(30, {});
  std::vector<int> all(30);
  for (int i = 0; i < 30; ++i) all[i] = i;
  EXPECT_THROW(g.alpha(all), GuardError);
}

TEST(Conflict, StarHasD2One) {
  // Agent 1 adjacent to everyone: each later agent's earlier neighborhood is {1}.
  const auto inst = gen_example1(8, 2.5, 0.1);
  const auto g = build_graph(inst.conflicts, inst.T);
  EXPECT_EQ(g.edge_count(), 7);
  EXPECT_EQ(g.d2(), 1);
}

TEST(Conflict, ClosedIntervalsTouchingAtEndpointOverlap) {
  ConflictSpec c;
  c.intervals = {{0, 0, 2.0}, {1, 0, 3.0}};
  const auto g = build_graph(canonical_conflicts(c, identity_arrivals(3)), 3);
  EXPECT_TRUE(g.adjacent(0, 1));
  ConflictSpec d;
  d.intervals = {{0, 0, 1.5}, {1, 0, 3.0}};
  EXPECT_FALSE(build_graph(canonical_conflicts(d, identity_arrivals(3)), 3).adjacent(0, 1));
}

TEST(Conflict, DifferentResourcesDoNotConflict) {
  ConflictSpec c;
  c.intervals = {{0, 0, 5.0}, {1, 1, 5.0}};
  EXPECT_EQ(build_graph(canonical_conflicts(c, identity_arrivals(2)), 2).edge_count(), 0);
}

TEST(Conflict, IndependenceTests) {
  const auto g = graph_from_edges(4, {{0, 2}});
  EXPECT_FALSE(g.is_independent(ElementSet(4, {0, 2})));
  EXPECT_TRUE(g.is_independent(ElementSet(4, {0, 1, 3})));
  EXPECT_FALSE(g.is_independent_with(ElementSet(4, {0}), 2));
  EXPECT_TRUE(g.is_independent_with(ElementSet(4, {0}), 1));
  EXPECT_EQ(g.earlier_neighbors(2), std::vector<int>{0});
  EXPECT_TRUE(g.earlier_neighbors(0).empty());
}

TEST(Conflict, IntervalBoundRequiresIntervalOnlyGraphs) {
  ConflictSpec c;
  c.edges = {{0, 1}};
  EXPECT_THROW(d_bound_intervals(canonical_conflicts(c, identity_arrivals(2)), 2), InputError);
}

TEST(Conflict, MaximalCliquesOfTriangleWithTail) {
  const auto g = graph_from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  const auto cl = g.maximal_cliques({0, 1, 2, 3});
  ASSERT_EQ(cl.size(), 2u);
  EXPECT_EQ(cl[0], (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(cl[1], (std::vector<int>{2, 3}));
}

// Each vertex requesting at most d resources gives d2 <= d.
TEST(Conflict, IntervalGraphsHaveD2AtMostD) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int d = 1 + static_cast<int>(s % 3);
    const auto inst = gen_interval_instance(15, d + 2, d, 2, s);
    const auto g = build_graph(inst.conflicts, inst.T);
    EXPECT_LE(g.d2(), d);
    EXPECT_EQ(d_bound_intervals(inst.conflicts, inst.T), inst.conflicts.max_requests(inst.T));
  }
}

}  // namespace
}  // namespace prophet
