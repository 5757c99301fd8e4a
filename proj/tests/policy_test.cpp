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

#include <cmath>
#include <vector>

#include "prophet/instance.hpp"
#include "prophet/policy.hpp"

namespace prophet {
namespace {

ConflictGraph no_edges(int T) { return ConflictGraph(identity_arrivals(T)); }

ConflictGraph path(int T) {
  ConflictGraph g(identity_arrivals(T));
  for (int t = 0; t + 1 < T; ++t) g.add_edge(t, t + 1, kExplicitEdgeSource);
  return g;
}

TEST(Prices, EmptyGraphGivesZeroPrices) {
  const auto pi = compute_pi({0.5, 0.5, 1.0}, {2.0, 3.0, 1.0}, no_edges(3));
  for (double p : pi) EXPECT_EQ(p, 0.0);
}

TEST(Prices, PathBackwardInduction) {
  // pi_3 = 0; pi_2 = x_3 y_3 = 1; pi_1 = x_2 [y_2 - pi_2]^+ = 0.
  const auto pi = compute_pi({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, path(3));
  EXPECT_DOUBLE_EQ(pi[0], 0.0);
  EXPECT_DOUBLE_EQ(pi[1], 1.0);
  EXPECT_DOUBLE_EQ(pi[2], 0.0);
}

TEST(Prices, RestrictedValueVanishesWhenPricesDominate) {
  EXPECT_DOUBLE_EQ(restricted_prophet_value({0.5, 1.0}, {2.0, 3.0}, {2.0, 4.0}), 0.0);
  EXPECT_DOUBLE_EQ(restricted_prophet_value({0.5, 1.0}, {2.0, 3.0}, {0.0, 0.0}), 4.0);
}

TEST(Prices, Example1) {
  const int T = 5;
  const double C = 2.5, eps = 0.01;
  const auto plan = PricePlan::build(gen_example1(T, C, eps));
  EXPECT_NEAR(plan.pi()[0], (T - 1) * (1 - eps), 1e-9);
  for (int t = 1; t < T; ++t) EXPECT_EQ(plan.pi()[t], 0.0);
  EXPECT_NEAR(plan.closed_form(), 6.4704, 1e-9);
  EXPECT_NEAR(plan.residual(ElementSet(T)), plan.closed_form(), 1e-9);
}

TEST(Residual, FreeMatroidIsConstant) {
  const auto inst = gen_random(5, 3, MatroidKind::kFree, 0.3, 2);
  const auto plan = PricePlan::build(inst);
  TauEvaluator taus(plan);
  const double r0 = plan.residual(ElementSet(5));
  for (std::uint32_t s = 0; s < 32; ++s) {
    ElementSet y(5);
    for (int t = 0; t < 5; ++t) {
      if (s >> t & 1) y.insert(t);
    }
    EXPECT_NEAR(plan.residual(y), r0, 1e-12);
    for (int t = 0; t < 5; ++t) EXPECT_NEAR(taus.tau(t, y), 0.0, 1e-12);
  }
}

TEST(Residual, DependentSetIsMinusInfinity) {
  const auto inst = gen_random(4, 2, MatroidKind::kUniform, 0.0, 3);
  const auto plan = PricePlan::build(inst);
  const int r = plan.matroid().spec().rank;
  ElementSet y(4);
  for (int t = 0; t <= r && t < 4; ++t) y.insert(t);
  if (r < 4) {
    EXPECT_EQ(plan.residual(y), -kInf);
  }
}

// One atom {1} with surplus 4 under uniform(1). A base element keeps its own
// surplus, so adding agent 1 costs nothing while adding agent 2 blocks it.
TEST(Residual, TwoAgentUniformThresholds) {
  Mixture mix{{{ElementSet(2, {0}), 1.0}}, {1.0, 0.0}};
  const PricePlan plan(MatroidOracle(MatroidSpec::uniform(2, 1)), no_edges(2), {1.0, 0.0}, {4.0, 0.0},
                       mix);
  TauEvaluator taus(plan);
  const ElementSet none(2);
  EXPECT_DOUBLE_EQ(plan.residual(none), 4.0);
  EXPECT_DOUBLE_EQ(taus.tau(0, none), 0.0);
  EXPECT_DOUBLE_EQ(taus.tau(1, none), 2.0);
  EXPECT_EQ(taus.tau(1, ElementSet(2, {0})), kInf);
}

TEST(Residual, ClosedFormMatchesAtomwiseEvaluation) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto inst = gen_random(6, 3, static_cast<MatroidKind>(s % 5), 0.4, s);
    const auto plan = PricePlan::build(inst);
    EXPECT_NEAR(plan.residual(ElementSet(6)), plan.closed_form(), 1e-9) << inst.metadata;
  }
}

TEST(Policy, Example1LowRealization) {
  const int T = 6;
  const auto inst = gen_example1(T, 2.5, 0.01);
  const auto plan = PricePlan::build(inst);
  std::vector<double> v(T, 1.0);
  v[0] = 0.0;
  const auto tr = run_policy(plan, v);
  EXPECT_FALSE(tr.decisions[0].accepted);
  for (int t = 1; t < T; ++t) {
    EXPECT_TRUE(tr.decisions[t].accepted);
    EXPECT_NEAR(tr.decisions[t].tau, 0.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(tr.welfare, T - 1);
}

TEST(Policy, Example1HighRealization) {
  const int T = 6;
  const auto inst = gen_example1(T, 2.5, 0.01);
  const auto plan = PricePlan::build(inst);
  std::vector<double> v(T, 1.0);
  v[0] = inst.valuations.values[2];
  const auto tr = run_policy(plan, v);
  EXPECT_TRUE(tr.decisions[0].accepted);
  for (int t = 1; t < T; ++t) {
    EXPECT_FALSE(tr.decisions[t].graph_feasible);
    EXPECT_TRUE(std::isnan(tr.decisions[t].tau));
  }
  EXPECT_DOUBLE_EQ(tr.welfare, v[0]);
}

TEST(Policy, ZeroValuesAcceptEveryone) {
  const auto inst = parse_instance(R"({"T":3,"values":[0],"probs":[[1],[1],[1]],"matroid":{"kind":"free"}})");
  const auto plan = PricePlan::build(inst);
  const auto tr = run_policy(plan, {0.0, 0.0, 0.0});
  EXPECT_EQ(tr.accepted.count(), 3);
  EXPECT_EQ(tr.welfare, 0.0);
}

TEST(Simulation, DeterministicValuesHaveZeroVariance) {
  const auto inst = parse_instance(R"({"T":3,"values":[2],"probs":[[1],[1],[1]],
      "matroid":{"kind":"uniform","rank":2}})");
  const auto plan = PricePlan::build(inst);
  const auto s = simulate(plan, inst.valuations, 500, 3);
  EXPECT_EQ(s.stddev, 0.0);
  EXPECT_DOUBLE_EQ(s.mean, run_policy(plan, {2.0, 2.0, 2.0}).welfare);
}

TEST(Simulation, ThreadCountDoesNotChangeResults) {
  const auto inst = gen_random(6, 3, MatroidKind::kLaminar, 0.4, 8);
  const auto plan = PricePlan::build(inst);
  const auto a = simulate(plan, inst.valuations, 3001, 5, 1);
  const auto b = simulate(plan, inst.valuations, 3001, 5, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stddev, b.stddev);
  const auto ba = simulate_baseline(inst, 0.5, 1001, 5, 1);
  const auto bb = simulate_baseline(inst, 0.5, 1001, 5, 3);
  EXPECT_EQ(ba.sim.mean, bb.sim.mean);
}

TEST(Simulation, SeedChangesSamples) {
  const auto inst = gen_random(6, 3, MatroidKind::kUniform, 0.4, 8);
  EXPECT_NE(sample_values(inst.valuations, 1, 0), sample_values(inst.valuations, 2, 0));
  EXPECT_EQ(sample_values(inst.valuations, 1, 7), sample_values(inst.valuations, 1, 7));
}

TEST(Baseline, Example1Residuals) {
  const int T = 5;
  const double C = 2.5, eps = 0.01;
  const auto inst = gen_example1(T, C, eps);
  BaselineResidual r(inst);
  EXPECT_FALSE(r.monte_carlo());
  EXPECT_NEAR(r(ElementSet(T)), C + T - 1 + eps, 1e-9);
  for (int t = 1; t < T; ++t) {
    EXPECT_NEAR(r(ElementSet(T, {t})), T - 1, 1e-9);
    // Threshold for later agents at the empty set.
    EXPECT_NEAR(kDefaultGamma * (r(ElementSet(T)) - r(ElementSet(T, {t}))), kDefaultGamma * (C + eps), 1e-9);
  }
}

TEST(Baseline, Example1RejectsSmallAgents) {
  const int T = 5;
  const auto inst = gen_example1(T, 2.5, 0.01);
  BaselineResidual r(inst);
  std::vector<double> v(T, 1.0);
  v[0] = 0.0;
  const auto tr = run_baseline(r, 0.5, v);
  EXPECT_EQ(tr.accepted.count(), 0);
  EXPECT_EQ(tr.welfare, 0.0);
}

TEST(Baseline, UnconstrainedAcceptsEveryone) {
  const auto inst = gen_random(4, 2, MatroidKind::kFree, 0.0, 6);
  BaselineResidual r(inst);
  const auto tr = run_baseline(r, 0.5, sample_values(inst.valuations, 1, 0));
  EXPECT_EQ(tr.accepted.count(), 4);
}

TEST(Baseline, GuardWithoutMonteCarlo) {
  const auto inst = gen_random(20, 3, MatroidKind::kFree, 0.0, 6);
  EXPECT_THROW(BaselineResidual(inst, false), GuardError);
  BaselineResidual mc(inst, true, 1, 200);
  EXPECT_TRUE(mc.monte_carlo());
  EXPECT_EQ(mc.bank_size(), 200u);
}

}  // namespace
}  // namespace prophet
