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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prophet/conflict.hpp"
#include "prophet/errors.hpp"
#include "prophet/exante.hpp"
#include "prophet/instance.hpp"
#include "prophet/matroid.hpp"
#include "prophet/mixture.hpp"
#include "prophet/oracle.hpp"
#include "prophet/policy.hpp"
#include "prophet/rng.hpp"
#include "prophet/xos.hpp"

namespace prophet {

inline constexpr double kBoundSlack = 1e-6;
inline constexpr double kIdentityTolerance = 1e-9;

struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
  bool skipped = false;
  std::string note;

  double margin() const { return lhs - rhs; }
};

inline CheckResult check_ge(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, lhs >= rhs, false, {}};
}

inline CheckResult check_skipped(std::string name, std::string why) {
  return {std::move(name), 0.0, 0.0, true, true, std::move(why)};
}

enum class D2Source { kExact, kIntervalBound };

inline const char* to_string(D2Source s) { return s == D2Source::kExact ? "exact" : "interval-bound"; }

struct D2Value {
  int value = 0;
  D2Source source = D2Source::kExact;
};

// Exact d2 when every earlier neighborhood is small enough for alpha;
// otherwise the interval bound, which needs a purely interval-induced graph.
inline D2Value d2_for_report(const Instance& inst, const ConflictGraph& g) {
  try {
    return {g.d2(), D2Source::kExact};
  } catch (const GuardError&) {
    return {d_bound_intervals(inst.conflicts, inst.T), D2Source::kIntervalBound};
  }
}

struct InstanceVerification {
  std::string label;
  std::string digest;
  int T = 0;
  double lp = 0.0;
  double restricted = 0.0;        // closed form
  double restricted_atoms = 0.0;  // atom-wise
  int d1 = 0;
  D2Value d2;
  std::optional<double> opt;
  SimulationSummary sim;
  std::size_t atoms = 0;
  std::vector<CheckResult> checks;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

struct VerifyOptions {
  std::int64_t samples = 20'000;
  std::uint64_t seed = 1;
  int threads = 1;
  DecomposeMethod method = DecomposeMethod::kAuto;
};

// Runs every inequality check on one instance.
inline InstanceVerification verify_all(const Instance& inst, const VerifyOptions& opt = {}) {
  InstanceVerification out;
  out.label = inst.metadata;
  out.digest = instance_digest(inst);
  out.T = inst.T;
  const MatroidOracle m(inst.matroid);
  const ConflictGraph g = build_graph(inst.conflicts, inst.T);
  const ExAnteSolution ex = solve_exante(inst, m, g);
  out.lp = ex.objective;
  out.d1 = m.d1();
  out.d2 = d2_for_report(inst, g);
  Mixture mix = decompose(m, ex.x_star, opt.method);
  out.atoms = mix.atoms.size();
  const auto mix_check = verify_mixture(m, mix, ex.x_star);
  const PricePlan plan(m, g, ex.x_star, ex.y_star, std::move(mix));
  out.restricted = plan.closed_form();
  out.restricted_atoms = plan.residual(ElementSet(inst.T));
  out.sim = simulate(plan, inst.valuations, opt.samples, opt.seed, opt.threads);
  const double d1f = out.d1 + 1.0;
  const double d2f = out.d2.value + 1.0;

  // (a) relaxation upper-bounds the prophet, with the constructive witness.
  if (inst.T <= kFamilyMaxGround && realization_count(inst.valuations) <= kRealizationLimit) {
    const auto fam = enumerate_feasible(m, g);
    out.opt = brute_force_opt(inst, fam);
    out.checks.push_back(check_ge("lp_upper_bound", out.lp, *out.opt - kBoundSlack));
    const auto w = lp_witness_check(inst, ex, fam);
    CheckResult c = check_ge("prophet_witness", -w.violation, -kBoundSlack);
    c.pass = c.pass && w.ok;
    c.note = w.unique ? "unique argmax" : "argmax not unique; witness uses the tie-break";
    out.checks.push_back(c);
  } else if (realization_count(inst.valuations) <= kRealizationLimit) {
    out.opt = opt_by_branch_and_bound(inst);
    out.checks.push_back(check_ge("lp_upper_bound", out.lp, *out.opt - kBoundSlack));
    out.checks.push_back(check_skipped("prophet_witness", "T > 20"));
  } else {
    out.checks.push_back(check_skipped("lp_upper_bound", "realizations exceed 10^6"));
    out.checks.push_back(check_skipped("prophet_witness", "realizations exceed 10^6"));
  }
  // (b) restricted prophet against the relaxation, exact.
  out.checks.push_back(check_ge("restricted_prophet_bound", out.restricted, out.lp / d2f - kBoundSlack));
  // (c) online policy against the restricted prophet, statistical.
  out.checks.push_back(
      check_ge("policy_vs_restricted", out.sim.mean + out.sim.radius, out.restricted / d1f - kBoundSlack));
  // (d) end to end.
  out.checks.push_back(
      check_ge("policy_vs_lp", out.sim.mean + out.sim.radius, out.lp / (d1f * d2f) - kBoundSlack));
  // (e) decomposition.
  {
    // Atom budget T+1 against the atom count; the flag covers all invariants.
    CheckResult c{"mixture", inst.T + 1.0, static_cast<double>(out.atoms), mix_check.ok, false,
                  mix_check.diagnostic};
    out.checks.push_back(c);
  }
  // Atom-wise residual equals the closed form.
  {
    const double diff = std::abs(out.restricted_atoms - out.restricted);
    out.checks.push_back(check_ge("closed_form_identity", kIdentityTolerance, diff));
  }
  // (f) interval-induced graphs have d2 <= d.
  if (inst.conflicts.has_explicit_edges()) {
    out.checks.push_back(check_skipped("interval_d2", "explicit edges present"));
  } else if (out.d2.source != D2Source::kExact) {
    out.checks.push_back(check_skipped("interval_d2", "d2 not computed exactly"));
  } else {
    out.checks.push_back(check_ge("interval_d2", inst.conflicts.max_requests(inst.T), out.d2.value));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpora.

inline constexpr MatroidKind kAllMatroidKinds[] = {MatroidKind::kFree, MatroidKind::kUniform,
                                                    MatroidKind::kPartition, MatroidKind::kLaminar,
                                                    MatroidKind::kExplicit};

// T in 2..6, K in 1..3, every matroid kind; conflicts rotate between
// explicit edges, interval requests, and both.
inline std::vector<Instance> fuzz_corpus(std::uint64_t seed, int count = 100) {
  std::vector<Instance> out;
  Rng rng(seed, 0x66757a7a);
  for (int i = 0; i < count; ++i) {
    const int T = 2 + static_cast<int>(rng.below(5));
    const int K = 1 + static_cast<int>(rng.below(3));
    const MatroidKind kind = kAllMatroidKinds[i % 5];
    const int mode = (i / 5) % 3;
    const double edge_prob = mode == 1 ? 0.0 : 0.2 + 0.2 * static_cast<double>(rng.below(3));
    const std::uint64_t s = rng();
    Instance inst = gen_random(T, K, kind, edge_prob, s);
    if (mode != 0) {
      const int J = 1 + static_cast<int>(rng.below(3));
      const int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(J)));
      const Instance iv = gen_interval_instance(T, J, d, K, s ^ 0x9e3779b97f4a7c15ull);
      ConflictSpec c = inst.conflicts;
      c.intervals = iv.conflicts.intervals;
      c.resources = iv.conflicts.resources;
      inst.conflicts = canonical_conflicts(std::move(c), identity_arrivals(T));
    }
    inst.metadata = "fuzz " + std::to_string(i) + " T=" + std::to_string(T) + " K=" + std::to_string(K) +
                    " kind=" + std::string(to_string(kind)) + " conflicts=" +
                    (mode == 0 ? "edges" : mode == 1 ? "intervals" : "edges+intervals");
    validate_instance(inst);
    out.push_back(std::move(inst));
  }
  return out;
}

// Interval-only instances, T <= 15, d in {1, 2, 3}.
inline std::vector<Instance> interval_corpus(std::uint64_t seed, int count = 200) {
  std::vector<Instance> out;
  Rng rng(seed, 0x696e74);
  for (int i = 0; i < count; ++i) {
    const int T = 2 + static_cast<int>(rng.below(14));
    const int d = 1 + i % 3;
    const int J = d + static_cast<int>(rng.below(3));
    out.push_back(gen_interval_instance(T, J, d, 2, rng()));
  }
  return out;
}

struct MixtureCase {
  MatroidSpec matroid;
  std::vector<double> x;
  std::string label;
};

// Half LP marginals of random instances (vertices of a face), half convex
// combinations of random independent sets (interior points).
inline std::vector<MixtureCase> mixture_corpus(std::uint64_t seed, int count = 500) {
  std::vector<MixtureCase> out;
  Rng rng(seed, 0x6d6978);
  for (int i = 0; i < count; ++i) {
    const MatroidKind kind = kAllMatroidKinds[i % 5];
    const int T = 2 + static_cast<int>(rng.below(kind == MatroidKind::kExplicit ? 8 : 13));
    MixtureCase c;
    if (i % 2 == 0) {
      const Instance inst = gen_random(T, 3, kind, 0.3, rng());
      c.matroid = inst.matroid;
      c.x = solve_exante(inst).x_star;
      c.label = "lp " + inst.metadata;
    } else {
      c.matroid = random_matroid(kind, T, rng);
      const MatroidOracle m(c.matroid);
      c.x.assign(static_cast<std::size_t>(T), 0.0);
      const int parts = 1 + static_cast<int>(rng.below(4));
      std::vector<double> w(static_cast<std::size_t>(parts));
      double total = 0.0;
      for (double& x : w) total += (x = 0.1 + rng.uniform());
      for (int p = 0; p < parts; ++p) {
        // Random maximal independent set.
        std::vector<WeightedElement> cand;
        for (int t = 0; t < T; ++t) cand.push_back({t, rng.uniform()});
        const auto s = m.greedy_max_weight(cand, ElementSet(T)).chosen;
        for (int t : s.members()) c.x[t] += w[p] / total;
      }
      for (double& x : c.x) x = std::min(x, 1.0);
      c.label = "combination kind=" + std::string(to_string(kind)) + " T=" + std::to_string(T);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// T <= 4, at most 3 items per agent, K <= 3.
inline std::vector<XOSInstance> xos_corpus(std::uint64_t seed, int count = 50) {
  std::vector<XOSInstance> out;
  Rng rng(seed, 0x786f73);
  for (int i = 0; i < count; ++i) {
    const int T = 1 + static_cast<int>(rng.below(4));
    const int K = 1 + static_cast<int>(rng.below(3));
    const double edge_prob = 0.15 * static_cast<double>(rng.below(4));
    const int resources = (i % 2 == 1) ? 1 + static_cast<int>(rng.below(2)) : 0;
    out.push_back(gen_xos_random(T, K, kAllMatroidKinds[i % 5], edge_prob, resources, rng()));
  }
  return out;
}

// Scalar instances in which every agent is worth either 0 or her own
// positive value, so the value the prophet accepts her at is unique.
inline Instance gen_two_point(int T, MatroidKind kind, double edge_prob, std::uint64_t seed) {
  Rng rng(seed, 0x7470);
  Instance inst;
  inst.T = T;
  inst.valuations.values.push_back(0.0);
  for (int t = 0; t < T; ++t) inst.valuations.values.push_back(1.0 + static_cast<double>(rng.below(900)) / 100.0);
  for (int t = 0; t < T; ++t) {
    std::vector<double> row(static_cast<std::size_t>(T + 1), 0.0);
    const double q = 0.2 + 0.6 * rng.uniform();
    row[0] = 1.0 - q;
    row[t + 1] = q;
    inst.valuations.probs.push_back(std::move(row));
  }
  inst.matroid = random_matroid(kind, T, rng);
  ConflictSpec c;
  for (int u = 0; u < T; ++u) {
    for (int v = u + 1; v < T; ++v) {
      if (rng.uniform() < edge_prob) c.edges.emplace_back(u, v);
    }
  }
  inst.conflicts = canonical_conflicts(std::move(c), identity_arrivals(T));
  inst.metadata = "two-point T=" + std::to_string(T) + " kind=" + std::string(to_string(kind)) +
                  " seed=" + std::to_string(seed);
  validate_instance(inst);
  return inst;
}

inline std::vector<Instance> two_point_corpus(std::uint64_t seed, int count = 20) {
  std::vector<Instance> out;
  Rng rng(seed, 0x7470);
  for (int i = 0; i < count; ++i) {
    const int T = 2 + static_cast<int>(rng.below(5));
    out.push_back(gen_two_point(T, kAllMatroidKinds[i % 5], 0.2 + 0.1 * (i % 4), rng()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// XOS checks.

struct XOSVerification {
  std::string label;
  XOSSimulation sim;
  double restricted_residual = 0.0;
  std::vector<CheckResult> checks;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  }
};

inline XOSVerification verify_xos(const XOSInstance& x, std::int64_t samples, std::uint64_t seed,
                                  int threads = 1) {
  XOSVerification out;
  out.label = x.metadata;
  const XOSPlan plan(x, prophet_stats(x));
  out.sim = xos_simulate(plan, samples, seed, threads);
  out.restricted_residual = plan.residual(ElementSet(x.items));
  double worst = 0.0;
  for (int t = 0; t < x.T; ++t) {
    for (int k = 0; k < x.agents[t].k_count(); ++k) {
      if (x.agents[t].probs[k] <= 0.0) continue;
      double s = 0.0;
      for (double q : plan.stats().x[t][k]) s += q;
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }
  out.checks.push_back(check_ge("allocation_distributions", 1e-12, worst));
  out.checks.push_back(check_ge("xos_policy_bound", out.sim.sim.mean + out.sim.sim.radius, out.sim.bound - kBoundSlack));
  out.checks.push_back(
      check_ge("restricted_prophet_bound", out.sim.restricted_prophet, out.sim.opt / (out.sim.d2 + 1.0)));
  out.checks.push_back(check_ge("closed_form_identity", kIdentityTolerance,
                                std::abs(out.restricted_residual - out.sim.restricted_prophet)));
  return out;
}

// Singleton-item reduction against the scalar policy driven by the same
// prophet statistics, on every joint realization.
struct SingletonConsistency {
  std::string label;
  std::size_t realizations = 0;
  std::size_t mismatches = 0;
  double opt_xos = 0.0;
  double opt_brute = 0.0;

  bool pass() const { return mismatches == 0 && std::abs(opt_xos - opt_brute) <= kIdentityTolerance; }
};

inline SingletonConsistency singleton_consistency(const Instance& inst) {
  SingletonConsistency out;
  out.label = inst.metadata;
  const auto fam = enumerate_feasible(inst);
  const auto alloc = prophet_allocation(inst, fam);
  const PricePlan scalar(MatroidOracle(inst.matroid), build_graph(inst.conflicts, inst.T), alloc.x_star,
                         alloc.y_star, alloc.sets);
  const XOSInstance x = xos_from_scalar(inst);
  const XOSPlan xp(x, prophet_stats(x));
  out.opt_xos = xp.opt();
  out.opt_brute = brute_force_opt(inst, fam);
  TauEvaluator st(scalar);
  XOSTauEvaluator xt(xp);
  for (const auto& rz : xp.stats().realizations) {
    std::vector<double> vals(static_cast<std::size_t>(inst.T));
    for (int t = 0; t < inst.T; ++t) vals[t] = inst.valuations.values[rz.k[t]];
    const auto a = run_policy(scalar, vals, st);
    const auto b = run_xos_policy(xp, rz.k, xt);
    ++out.realizations;
    for (int t = 0; t < inst.T; ++t) {
      if (a.accepted.contains(t) != (b.allocation[t] != 0)) {
        ++out.mismatches;
        break;
      }
    }
  }
  return out;
}

}  // namespace prophet
