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

#include "prophet/exante.hpp"
#include "prophet/instance.hpp"
#include "prophet/oracle.hpp"

namespace prophet {
namespace {

TEST(Feasible, FreeNoEdgesIsPowerSet) {
  const auto fam = enumerate_feasible(gen_random(5, 2, MatroidKind::kFree, 0.0, 1));
  EXPECT_EQ(fam.sets.size(), 32u);
  ASSERT_EQ(fam.maximal.size(), 1u);
  EXPECT_EQ(fam.maximal[0], 31u);
}

TEST(Feasible, Example1MaximalSets) {
  const auto fam = enumerate_feasible(gen_example1(3, 2.5, 0.1));
  EXPECT_EQ(fam.maximal, (std::vector<std::uint32_t>{1u, 6u}));
  EXPECT_TRUE(fam.contains(0));
}

TEST(Feasible, CompleteGraphHasOnlySingletons) {
  const auto fam = enumerate_feasible(gen_random(4, 2, MatroidKind::kFree, 1.0, 1));
  EXPECT_EQ(fam.sets, (std::vector<std::uint32_t>{0, 1, 2, 4, 8}));
}

TEST(Opt, SumOfMeansWithoutConstraints) {
  const auto inst = parse_instance(R"({"T":2,"values":[0,1,2],"probs":[[0.5,0.5,0],[0,0,1]],
      "matroid":{"kind":"free"}})");
  EXPECT_NEAR(brute_force_opt(inst), 2.5, 1e-12);
}

TEST(Opt, EdgeForcesAChoice) {
  const auto inst = parse_instance(R"({"T":2,"values":[0,2,3],"probs":[[0.5,0,0.5],[0,1,0]],
      "matroid":{"kind":"free"},"conflicts":{"edges":[[1,2]]}})");
  EXPECT_NEAR(brute_force_opt(inst), 2.5, 1e-12);
  EXPECT_NEAR(opt_by_branch_and_bound(inst), 2.5, 1e-12);
}

TEST(Opt, Example1Formula) {
  EXPECT_NEAR(brute_force_opt(gen_example1(4, 1.0, 0.5)), 4.5, 1e-12);
  for (int T : {3, 8, 16}) {
    EXPECT_NEAR(brute_force_opt(gen_example1(T, 2.5, 0.01)), 2.5 + T - 1 + 0.01, 1e-9);
  }
}

TEST(Opt, BranchAndBoundMatchesEnumeration) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto inst = gen_random(7, 2, static_cast<MatroidKind>(s % 5), 0.35, s);
    EXPECT_NEAR(opt_by_branch_and_bound(inst), brute_force_opt(inst), 1e-9) << inst.metadata;
  }
}

TEST(Opt, LargeInstancesUseBranchAndBound) {
  const auto inst = gen_example1(40, 2.5, 0.01);
  const auto v = opt_within_guard(inst);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->source, OptSource::kBranchAndBound);
  EXPECT_NEAR(v->value, 2.5 + 39 + 0.01, 1e-9);
}

TEST(Opt, NegativeValuesUseTheFullFamily) {
  const auto inst = parse_instance(R"({"T":2,"values":[-1,2],"probs":[[1,0],[0,1]],
      "matroid":{"kind":"free"}})",
                                   ParseOptions{true});
  EXPECT_NEAR(brute_force_opt(inst), 2.0, 1e-12);
}

// Adding an edge or lowering a capacity never raises OPT.
TEST(Opt, MonotoneUnderTighterConstraints) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto inst = gen_random(6, 3, MatroidKind::kUniform, 0.2, s);
    const double before = brute_force_opt(inst);
    auto tighter = inst;
    tighter.conflicts.edges.emplace_back(static_cast<int>(s % 3), 3 + static_cast<int>(s % 3));
    tighter.conflicts = canonical_conflicts(tighter.conflicts, identity_arrivals(6));
    EXPECT_LE(brute_force_opt(tighter), before + 1e-12);
    if (inst.matroid.rank > 0) {
      auto smaller = inst;
      smaller.matroid = MatroidSpec::uniform(6, inst.matroid.rank - 1);
      EXPECT_LE(brute_force_opt(smaller), before + 1e-12);
    }
  }
}

TEST(Opt, LpBoundsOptAndWitnessIsFeasible) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto inst = gen_random(6, 3, static_cast<MatroidKind>(s % 5), 0.4, s);
    const auto ex = solve_exante(inst);
    const auto fam = enumerate_feasible(inst);
    const double opt = brute_force_opt(inst, fam);
    EXPECT_GE(ex.objective, opt - 1e-6) << inst.metadata;
    const auto w = lp_witness_check(inst, ex, fam);
    EXPECT_NEAR(w.witness_objective, opt, 1e-9);
    EXPECT_LE(w.violation, 1e-6) << inst.metadata;
  }
}

TEST(Opt, Example1LpIsTight) {
  const auto inst = gen_example1(4, 2.5, 0.1);
  EXPECT_NEAR(solve_exante(inst).objective, brute_force_opt(inst), 1e-6);
}

TEST(Opt, ProphetTieBreak) {
  EXPECT_TRUE(prophet_prefers(0b001, 0b011));
  EXPECT_TRUE(prophet_prefers(0b011, 0b101));
  EXPECT_FALSE(prophet_prefers(0b101, 0b011));
  EXPECT_FALSE(prophet_prefers(0b011, 0b011));
}

TEST(Opt, RealizationGuard) {
  const auto inst = gen_random(20, 3, MatroidKind::kFree, 0.0, 2);
  EXPECT_GT(realization_count(inst.valuations), kRealizationLimit);
  EXPECT_THROW(brute_force_opt(inst), GuardError);
}

}  // namespace
}  // namespace prophet
