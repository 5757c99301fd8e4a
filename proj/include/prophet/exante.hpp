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

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "prophet/conflict.hpp"
#include "prophet/element_set.hpp"
#include "prophet/errors.hpp"
#include "prophet/instance.hpp"
#include "prophet/matroid.hpp"
#include "prophet/simplex.hpp"

namespace prophet {

inline constexpr double kFeasibilityTolerance = 1e-9;

enum class RowKind { kRank, kInterval, kClique, kNeighborhood };

inline const char* to_string(RowKind k) {
  switch (k) {
    case RowKind::kRank: return "rank";
    case RowKind::kInterval: return "interval";
    case RowKind::kClique: return "clique";
    case RowKind::kNeighborhood: return "neighborhood";
  }
  return "?";
}

// sum_{t in agents} sum_k x_tk <= rhs. Every constraint of the ex-ante
// relaxation except the box bounds has this shape.
struct MarginalRow {
  ElementSet agents;
  double rhs = 0.0;
  RowKind kind = RowKind::kRank;
};

struct LpModel {
  int T = 0;
  std::vector<double> values;               // objective coefficient of x_tk
  std::vector<std::vector<double>> upper;   // box bound p_tk
  std::vector<MarginalRow> rows;

  int count(RowKind kind) const {
    return static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                          [&](const MarginalRow& r) { return r.kind == kind; }));
  }

  void add_row(MarginalRow row) {
    for (const auto& r : rows) {
      if (r.agents == row.agents && r.rhs <= row.rhs) return;
    }
    rows.push_back(std::move(row));
  }
};

struct ExAnteSolution {
  std::vector<std::vector<double>> x;  // T x K, quantile-normalized
  std::vector<double> x_star;
  std::vector<double> y_star;
  double objective = 0.0;
  double objective_before_normalization = 0.0;
  std::vector<double> row_slacks;      // rhs - lhs, aligned with model.rows
  LpModel model;                       // including rows added by row generation
  int generation_rounds = 0;

  double max_violation() const {
    double v = 0.0;
    for (double s : row_slacks) v = std::max(v, -s);
    return v;
  }
};

// Earlier-or-equal agents whose resource-j interval contains time t, for
// each request (t, j).
inline std::vector<MarginalRow> interval_rows(const ConflictSpec& c, int T) {
  std::vector<MarginalRow> rows;
  for (const auto& req : c.intervals) {
    const int t = req.vertex;
    MarginalRow row{ElementSet(T), 1.0, RowKind::kInterval};
    for (const auto& other : c.intervals) {
      if (other.resource != req.resource || other.vertex > t) continue;
      if (other.end >= t + 1) row.agents.insert(other.vertex);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline LpModel build_lp(const Instance& inst, const MatroidOracle& matroid,
                        const ConflictGraph& graph) {
  LpModel m;
  m.T = inst.T;
  m.values = inst.valuations.values;
  m.upper = inst.valuations.probs;
  for (auto& rc : matroid.rank_constraints()) {
    m.rows.push_back({std::move(rc.set), static_cast<double>(rc.rank), RowKind::kRank});
  }
  for (auto& r : interval_rows(inst.conflicts, inst.T)) m.rows.push_back(std::move(r));
  if (inst.conflicts.has_explicit_edges()) {
    // Cliques of the closed earlier neighborhood through t.
    for (int t = 0; t < inst.T; ++t) {
      const auto earlier = graph.earlier_neighbors(t);
      if (earlier.empty() || static_cast<int>(earlier.size()) > kAlphaMaxVertices) continue;
      for (const auto& q : graph.maximal_cliques(earlier)) {
        MarginalRow row{ElementSet::from_members(inst.T, q), 1.0, RowKind::kClique};
        row.agents.insert(t);
        m.add_row(std::move(row));
      }
    }
  }
  return m;
}

inline LpModel build_lp(const Instance& inst) {
  return build_lp(inst, MatroidOracle(inst.matroid), build_graph(inst.conflicts, inst.T));
}

inline std::vector<double> marginals(const std::vector<std::vector<double>>& x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(std::accumulate(row.begin(), row.end(), 0.0));
  return out;
}

inline double row_lhs(const MarginalRow& row, const std::vector<double>& x_star) {
  double s = 0.0;
  for (int t : row.agents.members()) s += x_star[t];
  return s;
}

// Moves each agent's accepted mass onto her highest support values, so that
// y*_t is the mean of V_t over its top x*_t quantile. Marginals x*_t are
// unchanged, hence so is feasibility.
inline void quantile_normalize(std::vector<std::vector<double>>& x,
                               const std::vector<double>& values,
                               const std::vector<std::vector<double>>& upper) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });
  for (std::size_t t = 0; t < x.size(); ++t) {
    double remaining = std::accumulate(x[t].begin(), x[t].end(), 0.0);
    for (int k : order) {
      const double take = std::min(upper[t][k], std::max(0.0, remaining));
      x[t][k] = take;
      remaining -= take;
    }
  }
}

// Solves the model by simplex, then quantile-normalizes.
inline ExAnteSolution solve_lp(const LpModel& model, lp::Options opts = {}) {
  const int T = model.T;
  const int K = static_cast<int>(model.values.size());
  // Columns only for (t, k) that can carry positive value.
  std::vector<std::pair<int, int>> cols;
  std::vector<std::vector<int>> col_of(static_cast<std::size_t>(T), std::vector<int>(K, -1));
  for (int t = 0; t < T; ++t) {
    for (int k = 0; k < K; ++k) {
      if (model.upper[t][k] > 0.0 && model.values[k] > 0.0) {
        col_of[t][k] = static_cast<int>(cols.size());
        cols.emplace_back(t, k);
      }
    }
  }
  lp::Problem p;
  p.num_vars = static_cast<int>(cols.size());
  for (const auto& [t, k] : cols) p.objective.push_back(model.values[k]);
  for (const auto& row : model.rows) {
    lp::Row r;
    r.sense = lp::Sense::kLessEqual;
    r.rhs = row.rhs;
    for (int t : row.agents.members()) {
      for (int k = 0; k < K; ++k) {
        if (col_of[t][k] >= 0) r.coeffs.emplace_back(col_of[t][k], 1.0);
      }
    }
    if (!r.coeffs.empty()) p.rows.push_back(std::move(r));
  }
  for (int j = 0; j < p.num_vars; ++j) {
    lp::Row r;
    r.coeffs.emplace_back(j, 1.0);
    r.rhs = model.upper[cols[j].first][cols[j].second];
    p.rows.push_back(std::move(r));
  }
  const lp::Solution s = lp::solve(p, opts);
  switch (s.status) {
    case lp::Status::kOptimal: break;
    case lp::Status::kInfeasible: throw SolverError("ex-ante LP reported infeasible");
    case lp::Status::kUnbounded: throw SolverError("ex-ante LP reported unbounded");
    case lp::Status::kIterationLimit: throw SolverError("ex-ante LP hit the iteration cap");
  }
  ExAnteSolution out;
  out.model = model;
  out.x.assign(static_cast<std::size_t>(T), std::vector<double>(K, 0.0));
  for (int j = 0; j < p.num_vars; ++j) {
    const auto [t, k] = cols[j];
    double v = std::clamp(s.x[j], 0.0, model.upper[t][k]);
    if (v < 1e-13) v = 0.0;
    out.x[t][k] = v;
  }
  auto objective_of = [&](const std::vector<std::vector<double>>& x) {
    double o = 0.0;
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < K; ++k) o += model.values[k] * x[t][k];
    }
    return o;
  };
  out.objective_before_normalization = objective_of(out.x);
  quantile_normalize(out.x, model.values, model.upper);
  out.objective = objective_of(out.x);
  out.x_star = marginals(out.x);
  out.y_star.assign(static_cast<std::size_t>(T), 0.0);
  for (int t = 0; t < T; ++t) {
    if (out.x_star[t] <= 0.0) continue;
    double s_v = 0.0;
    for (int k = 0; k < K; ++k) s_v += model.values[k] * out.x[t][k];
    out.y_star[t] = s_v / out.x_star[t];
  }
  for (const auto& row : model.rows) out.row_slacks.push_back(row.rhs - row_lhs(row, out.x_star));
  return out;
}

// Builds and solves the relaxation. The earlier-neighborhood constraints
// sum_{t' < t, t' ~ t} x*_t' <= alpha(G[N^-(t)]) are then checked and any
// violated one is added before re-solving, at most T rounds.
inline ExAnteSolution solve_exante(const Instance& inst, const MatroidOracle& matroid,
                                   const ConflictGraph& graph, lp::Options opts = {}) {
  LpModel model = build_lp(inst, matroid, graph);
  std::vector<int> alpha_cache(static_cast<std::size_t>(inst.T), -1);
  ExAnteSolution sol = solve_lp(model, opts);
  for (int round = 0; round < inst.T; ++round) {
    bool added = false;
    for (int t = 0; t < inst.T; ++t) {
      const auto earlier = graph.earlier_neighbors(t);
      if (earlier.size() < 2 || static_cast<int>(earlier.size()) > kAlphaMaxVertices) continue;
      double lhs = 0.0;
      for (int u : earlier) lhs += sol.x_star[u];
      if (alpha_cache[t] < 0) alpha_cache[t] = graph.alpha(earlier);
      if (lhs > alpha_cache[t] + kFeasibilityTolerance) {
        model.add_row({ElementSet::from_members(inst.T, earlier),
                       static_cast<double>(alpha_cache[t]), RowKind::kNeighborhood});
        added = true;
      }
    }
    if (!added) break;
    sol = solve_lp(model, opts);
    sol.generation_rounds = round + 1;
  }
  if (sol.max_violation() > kFeasibilityTolerance) {
    throw SolverError("ex-ante solution violates a constraint beyond tolerance");
  }
  return sol;
}

inline ExAnteSolution solve_exante(const Instance& inst) {
  return solve_exante(inst, MatroidOracle(inst.matroid), build_graph(inst.conflicts, inst.T));
}

}  // namespace prophet
