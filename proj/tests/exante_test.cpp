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

#include <numeric>

#include "prophet/conflict.hpp"
#include "prophet/exante.hpp"
#include "prophet/instance.hpp"
#include "prophet/simplex.hpp"

namespace prophet {
namespace {

Instance from_text(const char* s) { return parse_instance(s); }

TEST(Simplex, SmallMaximization) {
  // max 3a + 5b; a <= 4, 2b <= 12, 3a + 2b <= 18  -> (2, 6), 36
  lp::Problem p;
  p.num_vars = 2;
  p.objective = {3, 5};
  p.rows = {{{{0, 1.0}}, lp::Sense::kLessEqual, 4},
            {{{1, 2.0}}, lp::Sense::kLessEqual, 12},
            {{{0, 3.0}, {1, 2.0}}, lp::Sense::kLessEqual, 18}};
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::kOptimal);
  EXPECT_NEAR(s.objective, 36.0, 1e-9);
  EXPECT_NEAR(s.x[0], 2.0, 1e-9);
  EXPECT_NEAR(s.x[1], 6.0, 1e-9);
}

TEST(Simplex, EqualityAndGreaterRows) {
  // max a + b; a + b = 1, a >= 0.25 -> objective 1
  lp::Problem p;
  p.num_vars = 2;
  p.objective = {1, 1};
  p.rows = {{{{0, 1.0}, {1, 1.0}}, lp::Sense::kEqual, 1}, {{{0, 1.0}}, lp::Sense::kGreaterEqual, 0.25}};
  const auto s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::kOptimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-9);
  EXPECT_GE(s.x[0], 0.25 - 1e-9);
}

TEST(Simplex, DetectsInfeasibleAndUnbounded) {
  lp::Problem bad;
  bad.num_vars = 1;
  bad.objective = {1};
  bad.rows = {{{{0, 1.0}}, lp::Sense::kLessEqual, 1}, {{{0, 1.0}}, lp::Sense::kGreaterEqual, 2}};
  EXPECT_EQ(lp::solve(bad).status, lp::Status::kInfeasible);
  lp::Problem open;
  open.num_vars = 2;
  open.objective = {1, 0};
  open.rows = {{{{1, 1.0}}, lp::Sense::kLessEqual, 1}};
  EXPECT_EQ(lp::solve(open).status, lp::Status::kUnbounded);
}

TEST(ExAnte, Example1IntervalRows) {
  const auto inst = gen_example1(5, 2.5, 0.01);
  const auto model = build_lp(inst);
  EXPECT_EQ(model.count(RowKind::kRank), 0);
  // Agent 1's own row contains only agent 1; each later agent shares a row
  // with agent 1.
  int pair_rows = 0;
  bool solo = false;
  for (const auto& r : model.rows) {
    if (r.kind != RowKind::kInterval) continue;
    EXPECT_DOUBLE_EQ(r.rhs, 1.0);
    EXPECT_TRUE(r.agents.contains(0));
    if (r.agents.count() == 1) solo = true;
    if (r.agents.count() == 2) ++pair_rows;
  }
  EXPECT_TRUE(solo);
  EXPECT_EQ(pair_rows, 4);
}

TEST(ExAnte, Example1Objective) {
  for (int T : {3, 5, 10}) {
    const double C = 2.5, eps = 0.01;
    const auto sol = solve_exante(gen_example1(T, C, eps));
    EXPECT_NEAR(sol.objective, C + T - 1 + eps, 1e-9);
    EXPECT_NEAR(sol.x_star[0], eps, 1e-9);
    for (int t = 1; t < T; ++t) EXPECT_NEAR(sol.x_star[t], 1 - eps, 1e-9);
  }
}

TEST(ExAnte, UnconstrainedTakesEveryPositiveValue) {
  const auto inst = gen_random(5, 3, MatroidKind::kFree, 0.0, 4);
  const auto sol = solve_exante(inst);
  double expected = 0.0;
  for (int t = 0; t < inst.T; ++t) expected += inst.valuations.mean(t);
  EXPECT_NEAR(sol.objective, expected, 1e-9);
  EXPECT_TRUE(build_lp(inst).rows.empty());
}

TEST(ExAnte, UniformOneDeterministic) {
  const auto inst = from_text(R"({"T":2,"values":[3,5],"probs":[[1,0],[0,1]],
      "matroid":{"kind":"uniform","rank":1}})");
  const auto model = build_lp(inst);
  ASSERT_EQ(model.rows.size(), 1u);
  EXPECT_EQ(model.rows[0].agents.count(), 2);
  const auto sol = solve_exante(inst);
  EXPECT_NEAR(sol.objective, 5.0, 1e-9);
  EXPECT_NEAR(sol.x_star[0], 0.0, 1e-9);
  EXPECT_NEAR(sol.x_star[1], 1.0, 1e-9);
  EXPECT_NEAR(sol.y_star[1], 5.0, 1e-9);
}

TEST(ExAnte, QuantileNormalizationKeepsTopMass) {
  std::vector<std::vector<double>> x = {{0.3, 0.0, 0.1}};
  quantile_normalize(x, {0.0, 1.0, 4.0}, {{0.5, 0.3, 0.2}});
  EXPECT_NEAR(x[0][2], 0.2, 1e-15);
  EXPECT_NEAR(x[0][1], 0.2, 1e-15);
  EXPECT_NEAR(x[0][0], 0.0, 1e-15);
}

TEST(ExAnte, SolutionsAreFeasibleOnRandomInstances) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto kind = static_cast<MatroidKind>(s % 5);
    const auto inst = gen_random(6, 3, kind, 0.4, s);
    const auto sol = solve_exante(inst);
    EXPECT_LE(sol.max_violation(), kFeasibilityTolerance);
    for (int t = 0; t < inst.T; ++t) {
      EXPECT_LE(sol.x_star[t], 1.0 + 1e-9);
      for (std::size_t k = 0; k < sol.x[t].size(); ++k) {
        EXPECT_LE(sol.x[t][k], inst.valuations.probs[t][k] + 1e-12);
      }
    }
    EXPECT_NEAR(sol.objective, sol.objective_before_normalization, 1e-9);
  }
}

// Scaling every value by c scales the optimum by c.
TEST(ExAnte, ObjectiveIsHomogeneous) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto inst = gen_random(5, 3, MatroidKind::kUniform, 0.3, s);
    const double base = solve_exante(inst).objective;
    for (double& v : inst.valuations.values) v *= 3.0;
    EXPECT_NEAR(solve_exante(inst).objective, 3.0 * base, 1e-8);
  }
}

}  // namespace
}  // namespace prophet
