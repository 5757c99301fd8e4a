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
#include <limits>
#include <memory>
#include <thread>
#include <unordered_map>
#include <vector>

#include "prophet/conflict.hpp"
#include "prophet/element_set.hpp"
#include "prophet/errors.hpp"
#include "prophet/exante.hpp"
#include "prophet/instance.hpp"
#include "prophet/matroid.hpp"
#include "prophet/mixture.hpp"
#include "prophet/oracle.hpp"
#include "prophet/rng.hpp"

namespace prophet {

inline constexpr double kTieAbsorption = 1e-12;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultGamma = 0.5;
inline constexpr int kBaselineMonteCarloSamples = 10'000;

// Backward induction pi_t = sum over later neighbors t' of
// x*_t' [y*_t' - pi_t']^+.
inline std::vector<double> compute_pi(const std::vector<double>& x_star,
                                      const std::vector<double>& y_star, const ConflictGraph& g) {
  const int T = static_cast<int>(x_star.size());
  std::vector<double> pi(static_cast<std::size_t>(T), 0.0);
  for (int t = T - 1; t >= 0; --t) {
    double s = 0.0;
    for (int u : g.neighbors(t)) {
      if (g.arrival(u) > g.arrival(t)) s += x_star[u] * std::max(y_star[u] - pi[u], 0.0);
    }
    pi[t] = s;
  }
  return pi;
}

inline std::vector<double> compute_pi(const ExAnteSolution& ex, const ConflictGraph& g) {
  return compute_pi(ex.x_star, ex.y_star, g);
}

// sum_t x*_t [y*_t - pi_t]^+
inline double restricted_prophet_value(const std::vector<double>& x_star,
                                       const std::vector<double>& y_star,
                                       const std::vector<double>& pi) {
  double s = 0.0;
  for (std::size_t t = 0; t < x_star.size(); ++t) s += x_star[t] * std::max(y_star[t] - pi[t], 0.0);
  return s;
}

inline double restricted_prophet_value(const ExAnteSolution& ex, const std::vector<double>& pi) {
  return restricted_prophet_value(ex.x_star, ex.y_star, pi);
}

// Everything the online rule needs. Immutable once built.
class PricePlan {
 public:
  struct AtomCandidates {
    double weight = 0.0;
    std::vector<WeightedElement> candidates;  // members with positive surplus
  };

  PricePlan(MatroidOracle matroid, ConflictGraph graph, std::vector<double> x_star,
            std::vector<double> y_star, Mixture mixture)
      : matroid_(std::move(matroid)),
        graph_(std::move(graph)),
        x_star_(std::move(x_star)),
        y_star_(std::move(y_star)),
        mixture_(std::move(mixture)) {
    pi_ = compute_pi(x_star_, y_star_, graph_);
    d1_ = matroid_.d1();
    for (const auto& a : mixture_.atoms) {
      AtomCandidates ac;
      ac.weight = a.weight;
      for (int t : a.set.members()) {
        const double s = y_star_[t] - pi_[t];
        if (s > 0.0) ac.candidates.push_back({t, s});
      }
      atoms_.push_back(std::move(ac));
    }
  }

  // LP marginals decomposed over the matroid.
  static PricePlan from_exante(const Instance& inst, const ExAnteSolution& ex,
                               DecomposeMethod method = DecomposeMethod::kAuto) {
    MatroidOracle m(inst.matroid);
    auto mix = decompose(m, ex.x_star, method);
    return PricePlan(std::move(m), build_graph(inst.conflicts, inst.T), ex.x_star, ex.y_star,
                     std::move(mix));
  }

  static PricePlan build(const Instance& inst) { return from_exante(inst, solve_exante(inst)); }

  int T() const { return static_cast<int>(x_star_.size()); }
  int d1() const { return d1_; }
  const MatroidOracle& matroid() const { return matroid_; }
  const ConflictGraph& graph() const { return graph_; }
  const std::vector<double>& pi() const { return pi_; }
  const std::vector<double>& x_star() const { return x_star_; }
  const std::vector<double>& y_star() const { return y_star_; }
  const Mixture& mixture() const { return mixture_; }
  const std::vector<AtomCandidates>& atoms() const { return atoms_; }

  double closed_form() const { return restricted_prophet_value(x_star_, y_star_, pi_); }

  // Atom-wise expectation of the best pi-reduced value addable to y under
  // the matroid alone; -inf when y is dependent.
  double residual(const ElementSet& y) const {
    if (!matroid_.is_independent(y)) return -kInf;
    double r = 0.0;
    for (const auto& a : atoms_) {
      if (a.candidates.empty()) continue;
      r += a.weight * matroid_.greedy_max_weight(a.candidates, y).value;
    }
    return r;
  }

 private:
  MatroidOracle matroid_;
  ConflictGraph graph_;
  std::vector<double> x_star_;
  std::vector<double> y_star_;
  Mixture mixture_;
  std::vector<double> pi_;
  int d1_ = 0;
  std::vector<AtomCandidates> atoms_;
};

// Caches residuals by accepted set. One per worker.
class TauEvaluator {
 public:
  explicit TauEvaluator(const PricePlan& plan) : plan_(&plan) {}

  double residual(const ElementSet& y) {
    auto it = memo_.find(y);
    if (it != memo_.end()) return it->second;
    if (memo_.size() > kMaxEntries) memo_.clear();
    const double r = plan_->residual(y);
    memo_.emplace(y, r);
    return r;
  }

  // (R(y) - R(y + t)) / (d1 + 1), or +inf when y + t is dependent.
  double tau(int t, const ElementSet& y) {
    const ElementSet yt = y.with(t);
    if (!plan_->matroid().is_independent(yt)) return kInf;
    return (residual(y) - residual(yt)) / (plan_->d1() + 1);
  }

 private:
  static constexpr std::size_t kMaxEntries = 1 << 20;
  const PricePlan* plan_;
  std::unordered_map<ElementSet, double, ElementSetHash> memo_;
};

struct Decision {
  double tau = std::numeric_limits<double>::quiet_NaN();  // NaN when not evaluated
  double price = 0.0;
  bool graph_feasible = false;
  bool accepted = false;
};

struct RunTrace {
  std::vector<double> values;
  ElementSet accepted;
  std::vector<Decision> decisions;
  double welfare = 0.0;
};

// Accepts t iff no accepted neighbor and V_t >= tau(t|Y) + pi_t.
inline RunTrace run_policy(const PricePlan& plan, const std::vector<double>& values,
                           TauEvaluator& taus) {
  const int T = plan.T();
  RunTrace tr{values, ElementSet(T), std::vector<Decision>(static_cast<std::size_t>(T)), 0.0};
  for (int t = 0; t < T; ++t) {
    Decision& d = tr.decisions[t];
    d.price = plan.pi()[t];
    d.graph_feasible = plan.graph().is_independent_with(tr.accepted, t);
    if (!d.graph_feasible) continue;
    d.tau = taus.tau(t, tr.accepted);
    if (values[t] >= d.tau + d.price - kTieAbsorption) {
      d.accepted = true;
      tr.accepted.insert(t);
      tr.welfare += values[t];
    }
  }
  return tr;
}

inline RunTrace run_policy(const PricePlan& plan, const std::vector<double>& values) {
  TauEvaluator taus(plan);
  return run_policy(plan, values, taus);
}

// Per-sample stream so results do not depend on how samples are split
// across workers.
inline std::vector<double> sample_values(const ValuationTable& v, std::uint64_t seed,
                                         std::uint64_t index) {
  Rng rng(seed, index);
  std::vector<double> out(static_cast<std::size_t>(v.agents()));
  for (int t = 0; t < v.agents(); ++t) out[t] = v.values[rng.categorical(v.probs[t])];
  return out;
}

struct SimulationSummary {
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  double mean = 0.0;
  double stddev = 0.0;
  double radius = 0.0;  // 3 * stddev / sqrt(samples)
};

inline SimulationSummary summarize(const std::vector<double>& w, std::uint64_t seed, int threads) {
  SimulationSummary s;
  s.samples = static_cast<std::int64_t>(w.size());
  s.seed = seed;
  s.threads = threads;
  double sum = 0.0;
  for (double x : w) sum += x;
  s.mean = sum / static_cast<double>(w.size());
  double ss = 0.0;
  for (double x : w) ss += (x - s.mean) * (x - s.mean);
  s.stddev = w.size() > 1 ? std::sqrt(ss / static_cast<double>(w.size() - 1)) : 0.0;
  s.radius = 3.0 * s.stddev / std::sqrt(static_cast<double>(w.size()));
  return s;
}

// Runs fn(worker, index) for every index in [0, n) over contiguous chunks.
template <typename MakeWorker, typename Fn>
void parallel_samples(std::int64_t n, int threads, MakeWorker&& make_worker, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1) {
    auto w = make_worker();
    for (std::int64_t i = 0; i < n; ++i) fn(w, i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  const std::int64_t chunk = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        auto worker = make_worker();
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        for (std::int64_t i = lo; i < hi; ++i) fn(worker, i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline SimulationSummary simulate(const PricePlan& plan, const ValuationTable& v,
                                  std::int64_t samples, std::uint64_t seed, int threads = 1) {
  if (samples < 1) throw InputError("samples must be >= 1");
  std::vector<double> welfare(static_cast<std::size_t>(samples));
  parallel_samples(
      samples, threads, [&] { return TauEvaluator(plan); },
      [&](TauEvaluator& taus, std::int64_t i) {
        welfare[i] = run_policy(plan, sample_values(v, seed, static_cast<std::uint64_t>(i)), taus).welfare;
      });
  return summarize(welfare, seed, threads);
}

// ---------------------------------------------------------------------------
// Residual-threshold baseline over the full feasible family.

// R(Y) = E[max_{S : S u Y in F} sum_{t in S} V_t], S allowed to overlap Y.
// Exact over joint realizations when their count is within the guard,
// otherwise (if allowed) averaged over a fixed bank of sampled realizations.
class BaselineResidual {
 public:
  BaselineResidual(const Instance& inst, bool allow_monte_carlo = false,
                   std::uint64_t seed = 0, int mc_samples = kBaselineMonteCarloSamples)
      : inst_(&inst), matroid_(inst.matroid), graph_(build_graph(inst.conflicts, inst.T)) {
    const auto& v = inst.valuations;
    if (realization_count(v) <= kRealizationLimit) {
      for_each_realization(v, [&](const std::vector<int>& k, double prob) {
        std::vector<double> vals(static_cast<std::size_t>(inst.T));
        for (int t = 0; t < inst.T; ++t) vals[t] = v.values[k[t]];
        bank_.push_back({std::move(vals), prob});
      });
    } else if (allow_monte_carlo) {
      monte_carlo_ = true;
      // A separate stream family from the policy samples.
      const std::uint64_t bank_seed = splitmix64(seed ^ 0x6261736531ull);
      for (int i = 0; i < mc_samples; ++i) {
        bank_.push_back({sample_values(v, bank_seed, static_cast<std::uint64_t>(i)), 1.0 / mc_samples});
      }
    } else {
      throw GuardError("baseline residual: joint realizations exceed 10^6 and Monte Carlo is off");
    }
  }

  bool monte_carlo() const { return monte_carlo_; }
  std::size_t bank_size() const { return bank_.size(); }
  const MatroidOracle& matroid() const { return matroid_; }
  const ConflictGraph& graph() const { return graph_; }

  bool feasible(const ElementSet& y) const {
    return matroid_.is_independent(y) && graph_.is_independent(y);
  }

  double operator()(const ElementSet& y) {
    auto it = memo_.find(y);
    if (it != memo_.end()) return it->second;
    double r = 0.0;
    if (!feasible(y)) {
      r = -kInf;
    } else {
      for (const auto& b : bank_) r += b.prob * max_weight_feasible(matroid_, graph_, b.values, y);
    }
    memo_.emplace(y, r);
    return r;
  }

 private:
  struct Banked {
    std::vector<double> values;
    double prob;
  };
  const Instance* inst_;
  MatroidOracle matroid_;
  ConflictGraph graph_;
  std::vector<Banked> bank_;
  bool monte_carlo_ = false;
  std::unordered_map<ElementSet, double, ElementSetHash> memo_;
};

// Accepts t iff Y + t is feasible and V_t >= gamma (R(Y) - R(Y + t)).
inline RunTrace run_baseline(BaselineResidual& r, double gamma, const std::vector<double>& values) {
  const int T = static_cast<int>(values.size());
  RunTrace tr{values, ElementSet(T), std::vector<Decision>(static_cast<std::size_t>(T)), 0.0};
  for (int t = 0; t < T; ++t) {
    Decision& d = tr.decisions[t];
    d.graph_feasible = r.graph().is_independent_with(tr.accepted, t);
    if (!d.graph_feasible) continue;
    const ElementSet yt = tr.accepted.with(t);
    if (!r.matroid().is_independent(yt)) {
      d.tau = kInf;
      continue;
    }
    d.tau = gamma * (r(tr.accepted) - r(yt));
    if (values[t] >= d.tau - kTieAbsorption) {
      d.accepted = true;
      tr.accepted = yt;
      tr.welfare += values[t];
    }
  }
  return tr;
}

struct BaselineSummary {
  SimulationSummary sim;
  bool monte_carlo = false;
  std::size_t residual_samples = 0;  // realizations (exact) or bank size
};

inline BaselineSummary simulate_baseline(const Instance& inst, double gamma, std::int64_t samples,
                                         std::uint64_t seed, int threads = 1,
                                         bool allow_monte_carlo = true) {
  if (samples < 1) throw InputError("samples must be >= 1");
  // Built once up front so guard errors surface before threads start.
  BaselineResidual proto(inst, allow_monte_carlo, seed);
  BaselineSummary out;
  out.monte_carlo = proto.monte_carlo();
  out.residual_samples = proto.bank_size();
  std::vector<double> welfare(static_cast<std::size_t>(samples));
  parallel_samples(
      samples, threads, [&] { return proto; },
      [&](BaselineResidual& r, std::int64_t i) {
        welfare[i] = run_baseline(r, gamma, sample_values(inst.valuations, seed, static_cast<std::uint64_t>(i))).welfare;
      });
  out.sim = summarize(welfare, seed, threads);
  return out;
}

}  // namespace prophet
