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
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "prophet/conflict.hpp"
#include "prophet/element_set.hpp"
#include "prophet/errors.hpp"
#include "prophet/exante.hpp"
#include "prophet/instance.hpp"
#include "prophet/matroid.hpp"
#include "prophet/mixture.hpp"

namespace prophet {

inline constexpr int kFamilyMaxGround = 20;
inline constexpr std::uint64_t kRealizationLimit = 1'000'000;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Every set independent in both the matroid and the graph, as bitmasks in
// increasing order, plus the inclusion-maximal ones.
struct FeasibleFamily {
  int ground = 0;
  std::vector<std::uint32_t> sets;
  std::vector<std::uint32_t> maximal;

  bool contains(std::uint32_t s) const { return std::binary_search(sets.begin(), sets.end(), s); }
};

inline FeasibleFamily enumerate_feasible(const MatroidOracle& m, const ConflictGraph& g) {
  const int n = m.ground_size();
  if (n > kFamilyMaxGround) throw GuardError("feasible-family enumeration requires T <= 20");
  FeasibleFamily fam;
  fam.ground = n;
  std::vector<std::uint32_t> nbr(static_cast<std::size_t>(n), 0);
  for (const auto& e : g.edges()) {
    nbr[e.u] |= std::uint32_t{1} << e.v;
    nbr[e.v] |= std::uint32_t{1} << e.u;
  }
  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<char> ok(total, 0);
  for (std::uint32_t s = 0; s < total; ++s) {
    bool graph_ok = true;
    for (std::uint32_t r = s; r != 0 && graph_ok; r &= r - 1) {
      if (nbr[std::countr_zero(r)] & s) graph_ok = false;
    }
    if (graph_ok && m.is_independent(m.mask_to_set(s))) {
      ok[s] = 1;
      fam.sets.push_back(s);
    }
  }
  for (std::uint32_t s : fam.sets) {
    bool maximal = true;
    for (int e = 0; e < n && maximal; ++e) {
      const std::uint32_t bit = std::uint32_t{1} << e;
      if (!(s & bit) && ok[s | bit]) maximal = false;
    }
    if (maximal) fam.maximal.push_back(s);
  }
  return fam;
}

inline FeasibleFamily enumerate_feasible(const Instance& inst) {
  return enumerate_feasible(MatroidOracle(inst.matroid), build_graph(inst.conflicts, inst.T));
}

// Number of joint realizations with positive probability.
inline std::uint64_t realization_count(const ValuationTable& v) {
  std::uint64_t count = 1;
  for (const auto& row : v.probs) {
    const auto nz = static_cast<std::uint64_t>(std::count_if(row.begin(), row.end(),
                                                             [](double p) { return p > 0.0; }));
    count *= std::max<std::uint64_t>(nz, 1);
    if (count > kRealizationLimit) return kRealizationLimit + 1;
  }
  return count;
}

// Calls f(k, prob) for every joint realization with positive probability,
// where k[t] is agent t's support index. Order is lexicographic in k.
template <typename F>
void for_each_realization(const ValuationTable& v, F&& f) {
  if (realization_count(v) > kRealizationLimit) {
    throw GuardError("joint realization count exceeds 10^6");
  }
  const int T = v.agents();
  std::vector<std::vector<int>> support(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    for (int k = 0; k < v.support_size(); ++k) {
      if (v.probs[t][k] > 0.0) support[t].push_back(k);
    }
  }
  std::vector<int> pos(static_cast<std::size_t>(T), 0);
  std::vector<int> k(static_cast<std::size_t>(T), 0);
  while (true) {
    double prob = 1.0;
    for (int t = 0; t < T; ++t) {
      k[t] = support[t][pos[t]];
      prob *= v.probs[t][k[t]];
    }
    f(static_cast<const std::vector<int>&>(k), prob);
    int t = T - 1;
    while (t >= 0 && ++pos[t] == static_cast<int>(support[t].size())) pos[t--] = 0;
    if (t < 0) break;
  }
}

// Prophet tie-break among equal-value sets: fewer elements first, then the
// lexicographically smaller sorted member list.
inline bool prophet_prefers(std::uint32_t a, std::uint32_t b) {
  const int ca = std::popcount(a);
  const int cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  const std::uint32_t diff = a ^ b;
  return diff != 0 && (a & (diff & (~diff + 1))) != 0;
}

// E[max_{S in F} sum_{t in S} V_t] by exhaustive enumeration.
inline double brute_force_opt(const Instance& inst, const FeasibleFamily& fam) {
  const auto& v = inst.valuations;
  const bool nonneg = std::all_of(v.values.begin(), v.values.end(), [](double x) { return x >= 0.0; });
  const auto& candidates = nonneg ? fam.maximal : fam.sets;
  double opt = 0.0;
  std::vector<double> vals(static_cast<std::size_t>(inst.T));
  for_each_realization(v, [&](const std::vector<int>& k, double prob) {
    for (int t = 0; t < inst.T; ++t) vals[t] = v.values[k[t]];
    double best = kNegInf;
    for (std::uint32_t s : candidates) {
      double sum = 0.0;
      for (std::uint32_t r = s; r != 0; r &= r - 1) sum += vals[std::countr_zero(r)];
      best = std::max(best, sum);
    }
    opt += prob * best;
  });
  return opt;
}

inline double brute_force_opt(const Instance& inst) {
  return brute_force_opt(inst, enumerate_feasible(inst));
}

namespace oracle_detail {

struct BranchAndBound {
  const MatroidOracle& m;
  const ConflictGraph& g;
  std::vector<double> weight;  // by element; only positive entries are candidates
  double best = kNegInf;

  double relaxation(const std::vector<int>& cand, const ElementSet& base) const {
    std::vector<WeightedElement> w;
    w.reserve(cand.size());
    for (int e : cand) w.push_back({e, weight[e]});
    return m.greedy_max_weight(w, base).value;
  }

  void run(const ElementSet& chosen, double value, const std::vector<int>& cand) {
    const double bound = relaxation(cand, chosen);
    if (value + bound <= best) return;
    int pick = -1;
    int pick_degree = 0;
    for (int u : cand) {
      int deg = 0;
      for (int w : cand) deg += g.adjacent(u, w) ? 1 : 0;
      if (deg > pick_degree) {
        pick = u;
        pick_degree = deg;
      }
    }
    if (pick < 0) {
      // No conflicts left among candidates: the matroid greedy is exact.
      best = std::max(best, value + bound);
      return;
    }
    if (m.is_independent(chosen.with(pick))) {
      std::vector<int> next;
      for (int u : cand) {
        if (u != pick && !g.adjacent(u, pick)) next.push_back(u);
      }
      run(chosen.with(pick), value + weight[pick], next);
    }
    std::vector<int> rest;
    for (int u : cand) {
      if (u != pick) rest.push_back(u);
    }
    run(chosen, value, rest);
  }
};

}  // namespace oracle_detail

// max over S with S u base feasible (matroid and graph) of sum_{t in S} w_t.
// S may overlap base, so base elements count with their own weight when
// positive. Returns -inf when base itself is infeasible.
inline double max_weight_feasible(const MatroidOracle& m, const ConflictGraph& g,
                                  const std::vector<double>& weight, const ElementSet& base) {
  if (!m.is_independent(base) || !g.is_independent(base)) return kNegInf;
  double value = 0.0;
  std::vector<int> cand;
  for (int e = 0; e < m.ground_size(); ++e) {
    if (base.contains(e)) {
      value += std::max(0.0, weight[e]);
    } else if (weight[e] > 0.0 && g.is_independent_with(base, e)) {
      cand.push_back(e);
    }
  }
  oracle_detail::BranchAndBound bb{m, g, weight, kNegInf};
  bb.run(base, value, cand);
  return bb.best;
}

// OPT for instances beyond the family-enumeration guard: per realization
// the branch-and-bound maximum, still exact.
inline double opt_by_branch_and_bound(const Instance& inst) {
  const MatroidOracle m(inst.matroid);
  const ConflictGraph g = build_graph(inst.conflicts, inst.T);
  const ElementSet none(inst.T);
  const auto& v = inst.valuations;
  double opt = 0.0;
  std::vector<double> vals(static_cast<std::size_t>(inst.T));
  for_each_realization(v, [&](const std::vector<int>& k, double prob) {
    for (int t = 0; t < inst.T; ++t) vals[t] = v.values[k[t]];
    opt += prob * max_weight_feasible(m, g, vals, none);
  });
  return opt;
}

// Exact OPT by whichever oracle fits; throws GuardError when neither does.
inline double exact_opt(const Instance& inst) {
  if (inst.T <= kFamilyMaxGround) return brute_force_opt(inst);
  return opt_by_branch_and_bound(inst);
}

enum class OptSource { kEnumeration, kBranchAndBound };

inline const char* to_string(OptSource s) {
  return s == OptSource::kEnumeration ? "family-enumeration" : "branch-and-bound";
}

struct OptValue {
  double value = 0.0;
  OptSource source = OptSource::kEnumeration;
};

// Exact OPT when cheap enough to be routine: enumeration for T <= 20, and
// branch and bound beyond that when at most 10^4 realizations carry mass.
inline std::optional<OptValue> opt_within_guard(const Instance& inst) {
  const auto n = realization_count(inst.valuations);
  if (inst.T <= kFamilyMaxGround && n <= kRealizationLimit) {
    return OptValue{brute_force_opt(inst), OptSource::kEnumeration};
  }
  if (n <= 10'000) return OptValue{opt_by_branch_and_bound(inst), OptSource::kBranchAndBound};
  return std::nullopt;
}

// Per-realization prophet allocation (argmax over F with the prophet
// tie-break), aggregated: LP-shaped witness x_tk = Pr[t chosen, V_t = v^k],
// the distribution of chosen sets, and whether every argmax was unique.
struct ProphetAllocation {
  std::vector<std::vector<double>> x;
  std::vector<double> x_star;
  std::vector<double> y_star;
  double opt = 0.0;
  bool unique = true;
  Mixture sets;  // not limited to T+1 atoms
};

inline ProphetAllocation prophet_allocation(const Instance& inst, const FeasibleFamily& fam) {
  const auto& v = inst.valuations;
  const int T = inst.T;
  const int K = v.support_size();
  ProphetAllocation out;
  out.x.assign(static_cast<std::size_t>(T), std::vector<double>(K, 0.0));
  std::vector<double> vals(static_cast<std::size_t>(T));
  std::vector<std::pair<std::uint32_t, double>> chosen;
  for_each_realization(v, [&](const std::vector<int>& k, double prob) {
    for (int t = 0; t < T; ++t) vals[t] = v.values[k[t]];
    double best = kNegInf;
    std::uint32_t arg = 0;
    bool tie = false;
    for (std::uint32_t s : fam.sets) {
      double sum = 0.0;
      for (std::uint32_t r = s; r != 0; r &= r - 1) sum += vals[std::countr_zero(r)];
      if (sum > best + 1e-12) {
        best = sum;
        arg = s;
        tie = false;
      } else if (sum >= best - 1e-12) {
        // Sets differing only by zero-valued agents are not a real tie.
        bool zero_diff = true;
        for (std::uint32_t r = s ^ arg; r != 0; r &= r - 1) {
          if (vals[std::countr_zero(r)] != 0.0) zero_diff = false;
        }
        if (!zero_diff) tie = true;
        if (prophet_prefers(s, arg)) arg = s;
      }
    }
    if (tie) out.unique = false;
    out.opt += prob * best;
    for (std::uint32_t r = arg; r != 0; r &= r - 1) {
      const int t = std::countr_zero(r);
      out.x[t][k[t]] += prob;
    }
    chosen.emplace_back(arg, prob);
  });
  std::sort(chosen.begin(), chosen.end());
  out.sets.marginals.assign(static_cast<std::size_t>(T), 0.0);
  for (const auto& [s, p] : chosen) {
    if (!out.sets.atoms.empty() && out.sets.atoms.back().set.low_word() == s) {
      out.sets.atoms.back().weight += p;
    } else {
      ElementSet set(T);
      for (std::uint32_t r = s; r != 0; r &= r - 1) set.insert(std::countr_zero(r));
      out.sets.atoms.push_back({std::move(set), p});
    }
  }
  out.x_star = marginals(out.x);
  out.sets.marginals = out.x_star;
  out.y_star.assign(static_cast<std::size_t>(T), 0.0);
  for (int t = 0; t < T; ++t) {
    if (out.x_star[t] <= 0.0) continue;
    double s = 0.0;
    for (int k = 0; k < K; ++k) s += v.values[k] * out.x[t][k];
    out.y_star[t] = s / out.x_star[t];
  }
  return out;
}

inline ProphetAllocation prophet_allocation(const Instance& inst) {
  return prophet_allocation(inst, enumerate_feasible(inst));
}

// Largest violation of the model's rows and box bounds by a T x K point.
inline double lp_violation(const LpModel& model, const std::vector<std::vector<double>>& x) {
  double worst = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    for (std::size_t k = 0; k < x[t].size(); ++k) {
      worst = std::max({worst, x[t][k] - model.upper[t][k], -x[t][k]});
    }
  }
  const auto xs = marginals(x);
  for (const auto& row : model.rows) worst = std::max(worst, row_lhs(row, xs) - row.rhs);
  return worst;
}

// The prophet's own acceptance statistics restricted to positive values form
// a feasible point of the relaxation whose objective equals OPT.
struct WitnessCheck {
  double opt = 0.0;
  double witness_objective = 0.0;
  double violation = 0.0;
  bool unique = true;
  bool ok = false;
};

inline WitnessCheck lp_witness_check(const Instance& inst, const ExAnteSolution& ex,
                                     const FeasibleFamily& fam, double tol = 1e-6) {
  const auto alloc = prophet_allocation(inst, fam);
  auto x = alloc.x;
  for (auto& row : x) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (inst.valuations.values[k] <= 0.0) row[k] = 0.0;
    }
  }
  WitnessCheck c;
  c.opt = alloc.opt;
  c.unique = alloc.unique;
  for (std::size_t t = 0; t < x.size(); ++t) {
    for (std::size_t k = 0; k < x[t].size(); ++k) c.witness_objective += inst.valuations.values[k] * x[t][k];
  }
  c.violation = lp_violation(ex.model, x);
  c.ok = c.violation <= tol && ex.objective >= c.witness_objective - tol;
  return c;
}

}  // namespace prophet
