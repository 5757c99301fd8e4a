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

#include "prophet/errors.hpp"
#include "prophet/instance.hpp"
#include "prophet/matroid.hpp"
#include "prophet/rng.hpp"

namespace prophet {
namespace {

ElementSet set_of(int n, std::initializer_list<int> xs) { return ElementSet(n, xs); }

TEST(Matroid, UniformRankAndIndependence) {
  const MatroidOracle m(MatroidSpec::uniform(4, 2));
  EXPECT_TRUE(m.is_independent(set_of(4, {0, 3})));
  EXPECT_FALSE(m.is_independent(set_of(4, {0, 1, 3})));
  EXPECT_EQ(m.rank(ElementSet::full(4)), 2);
  EXPECT_EQ(m.d1(), 1);
}

TEST(Matroid, FreeMatroidHasD1Zero) {
  const MatroidOracle m(MatroidSpec::free(5));
  EXPECT_EQ(m.d1(), 0);
  EXPECT_TRUE(m.is_independent(ElementSet::full(5)));
  EXPECT_TRUE(m.rank_constraints().empty());
}

TEST(Matroid, PartitionLeavesUncoveredElementsFree) {
  const MatroidOracle m(MatroidSpec::partition(5, {{{0, 1, 2}, 1}}));
  EXPECT_TRUE(m.is_independent(set_of(5, {0, 3, 4})));
  EXPECT_FALSE(m.is_independent(set_of(5, {0, 1})));
  EXPECT_EQ(m.rank(ElementSet::full(5)), 3);
}

TEST(Matroid, LaminarNestedCapacities) {
  const MatroidOracle m(MatroidSpec::laminar(4, {{{0, 1, 2, 3}, 2}, {{0, 1}, 1}}));
  EXPECT_FALSE(m.is_independent(set_of(4, {0, 1})));
  EXPECT_TRUE(m.is_independent(set_of(4, {0, 2})));
  EXPECT_FALSE(m.is_independent(set_of(4, {0, 2, 3})));
}

TEST(Matroid, ExplicitGraphicMatroid) {
  // Triangle on vertices {0,1,2}: edges 0,1,2; any two edges form a forest.
  const auto bases = graphic_matroid_bases({{0, 1}, {1, 2}, {0, 2}}, 3);
  const MatroidOracle m(MatroidSpec::explicit_bases(3, bases));
  EXPECT_TRUE(m.exchange_verified());
  EXPECT_TRUE(m.is_independent(set_of(3, {0, 2})));
  EXPECT_FALSE(m.is_independent(ElementSet::full(3)));
  EXPECT_EQ(m.rank(ElementSet::full(3)), 2);
  const auto rc = m.rank_constraints();
  ASSERT_EQ(rc.size(), 1u);
  EXPECT_EQ(rc[0].rank, 2);
}

TEST(Matroid, ExplicitRejectsNonMatroid) {
  // {0,1} and {2} as bases violates the exchange axiom.
  EXPECT_THROW(MatroidOracle(MatroidSpec::explicit_bases(3, {{0, 1}, {2}})), InputError);
}

TEST(Matroid, GreedyTieBreaksToSmallerIndex) {
  const MatroidOracle m(MatroidSpec::uniform(3, 1));
  const std::vector<WeightedElement> c = {{2, 5.0}, {1, 5.0}};
  const auto r = m.greedy_max_weight(c, ElementSet(3));
  EXPECT_TRUE(r.chosen.contains(1));
  EXPECT_DOUBLE_EQ(r.value, 5.0);
}

TEST(Matroid, GreedyAtFullRankBaseReturnsEmpty) {
  const MatroidOracle m(MatroidSpec::uniform(3, 1));
  const std::vector<WeightedElement> c = {{1, 5.0}, {2, 3.0}};
  const auto r = m.greedy_max_weight(c, set_of(3, {0}));
  EXPECT_TRUE(r.chosen.empty());
  EXPECT_DOUBLE_EQ(r.value, 0.0);
}

TEST(Matroid, GreedyCountsCandidatesAlreadyInBase) {
  const MatroidOracle m(MatroidSpec::uniform(3, 1));
  const std::vector<WeightedElement> c = {{0, 4.0}, {1, 7.0}};
  const auto r = m.greedy_max_weight(c, set_of(3, {0}));
  EXPECT_DOUBLE_EQ(r.value, 4.0);
}

TEST(Matroid, GreedyRejectsDependentBase) {
  const MatroidOracle m(MatroidSpec::uniform(3, 1));
  const std::vector<WeightedElement> c = {{2, 1.0}};
  EXPECT_THROW(m.greedy_max_weight(c, set_of(3, {0, 1})), InputError);
}

// Greedy against exhaustive search over independent sets.
TEST(Matroid, GreedyIsOptimalOnRandomInstances) {
  Rng rng(3);
  for (int round = 0; round < 200; ++round) {
    const auto kind = static_cast<MatroidKind>(round % 5);
    const int n = 2 + static_cast<int>(rng.below(7));
    const MatroidOracle m(random_matroid(kind, n, rng));
    std::vector<WeightedElement> c;
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int e = 0; e < n; ++e) {
      if (rng.below(4) == 0) continue;
      w[e] = static_cast<double>(rng.below(100));
      c.push_back({e, w[e]});
    }
    double best = 0.0;
    for (std::uint32_t s : m.independent_masks()) {
      double v = 0.0;
      for (int e = 0; e < n; ++e) {
        if (s & (1u << e)) v += w[e];
      }
      best = std::max(best, v);
    }
    EXPECT_DOUBLE_EQ(m.greedy_max_weight(c, ElementSet(n)).value, best);
  }
}

// Rank constraints describe exactly the independent sets among 0/1 points.
TEST(Matroid, RankConstraintsCutOffDependentSets) {
  Rng rng(5);
  for (int round = 0; round < 100; ++round) {
    const auto kind = static_cast<MatroidKind>(round % 5);
    const int n = 2 + static_cast<int>(rng.below(6));
    const MatroidOracle m(random_matroid(kind, n, rng));
    const auto rc = m.rank_constraints();
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
      const ElementSet set = m.mask_to_set(s);
      bool ok = true;
      for (const auto& c : rc) {
        ElementSet both = set;
        both &= c.set;
        if (both.count() > c.rank) ok = false;
      }
      EXPECT_EQ(ok, m.is_independent(set));
    }
  }
}

}  // namespace
}  // namespace prophet
