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
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "prophet/canonical_json.hpp"
#include "prophet/conflict.hpp"
#include "prophet/element_set.hpp"
#include "prophet/errors.hpp"
#include "prophet/instance.hpp"
#include "prophet/matroid.hpp"
#include "prophet/oracle.hpp"
#include "prophet/policy.hpp"
#include "prophet/rng.hpp"

namespace prophet {

inline constexpr int kXosMaxItems = 14;

// Max of additive clauses over the owning agent's items. Subsets are local
// bitmasks over that agent's item list.
struct XOSValuation {
  std::vector<std::vector<double>> clauses;

  static double clause_sum(const std::vector<double>& w, std::uint32_t s) {
    double v = 0.0;
    for (std::uint32_t r = s; r != 0; r &= r - 1) v += w[std::countr_zero(r)];
    return v;
  }

  // Lowest-index clause attaining the max on s.
  int supporting_clause(std::uint32_t s) const {
    int best = 0;
    double best_v = clause_sum(clauses[0], s);
    for (int c = 1; c < static_cast<int>(clauses.size()); ++c) {
      const double v = clause_sum(clauses[c], s);
      if (v > best_v) {
        best = c;
        best_v = v;
      }
    }
    return best;
  }

  double value(std::uint32_t s) const { return clause_sum(clauses[supporting_clause(s)], s); }

  friend bool operator==(const XOSValuation&, const XOSValuation&) = default;
};

// u(i, S): weight of i in the clause supporting S, for i in S; 0 elsewhere.
inline std::vector<double> supporting_prices(const XOSValuation& v, std::uint32_t s) {
  const auto& w = v.clauses[v.supporting_clause(s)];
  std::vector<double> u(w.size(), 0.0);
  for (std::uint32_t r = s; r != 0; r &= r - 1) u[std::countr_zero(r)] = w[std::countr_zero(r)];
  return u;
}

struct XOSAgent {
  std::vector<int> items;                 // global item ids, ascending
  std::vector<double> probs;              // one per valuation
  std::vector<XOSValuation> valuations;

  int k_count() const { return static_cast<int>(probs.size()); }
  std::uint32_t subsets() const { return std::uint32_t{1} << items.size(); }

  friend bool operator==(const XOSAgent&, const XOSAgent&) = default;
};

struct XOSInstance {
  int T = 0;
  int items = 0;
  std::vector<XOSAgent> agents;
  MatroidSpec matroid;   // over items
  ConflictSpec conflicts;  // over items
  std::string metadata;

  std::vector<int> owner() const {
    std::vector<int> o(static_cast<std::size_t>(items), -1);
    for (int t = 0; t < T; ++t) {
      for (int i : agents[t].items) o[i] = t;
    }
    return o;
  }

  // Items arrive with their owner (1-based).
  std::vector<int> arrivals() const {
    auto a = owner();
    for (int& x : a) ++x;
    return a;
  }

  std::uint32_t to_global(int t, std::uint32_t local) const {
    std::uint32_t g = 0;
    for (std::uint32_t r = local; r != 0; r &= r - 1) g |= std::uint32_t{1} << agents[t].items[std::countr_zero(r)];
    return g;
  }

  std::uint32_t to_local(int t, std::uint32_t global) const {
    std::uint32_t l = 0;
    const auto& its = agents[t].items;
    for (std::size_t j = 0; j < its.size(); ++j) {
      if (global & (std::uint32_t{1} << its[j])) l |= std::uint32_t{1} << j;
    }
    return l;
  }

  friend bool operator==(const XOSInstance&, const XOSInstance&) = default;
};

inline void validate_xos(const XOSInstance& x) {
  if (x.T < 1) throw InputError("T must be >= 1");
  if (static_cast<int>(x.agents.size()) != x.T) throw InputError("expected one item list per agent");
  if (x.items < 1 || x.items > kXosMaxItems) throw InputError("item count must be in 1..14");
  std::vector<int> seen(static_cast<std::size_t>(x.items), 0);
  for (int t = 0; t < x.T; ++t) {
    const auto& a = x.agents[t];
    if (a.items.empty()) throw InputError("agent " + std::to_string(t + 1) + " owns no items");
    for (int i : a.items) {
      if (i < 0 || i >= x.items) throw InputError("item id out of range");
      if (seen[i]++) throw InputError("item " + std::to_string(i + 1) + " owned twice");
    }
    if (!std::is_sorted(a.items.begin(), a.items.end())) throw InputError("item lists must be ascending");
    if (a.probs.empty() || a.probs.size() != a.valuations.size()) {
      throw InputError("agent " + std::to_string(t + 1) + ": probs and clauses disagree in length");
    }
    double sum = 0.0;
    for (double p : a.probs) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("probabilities must be finite and >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbSumTolerance) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "agent %d: row sum %.12g != 1", t + 1, sum);
      throw InputError(buf);
    }
    for (const auto& v : a.valuations) {
      if (v.clauses.empty()) throw InputError("every valuation needs at least one clause");
      for (const auto& c : v.clauses) {
        if (c.size() != a.items.size()) throw InputError("clause length differs from the agent's item count");
        for (double w : c) {
          if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("clause weights must be finite and >= 0");
        }
      }
    }
  }
  for (int i = 0; i < x.items; ++i) {
    if (!seen[i]) throw InputError("item " + std::to_string(i + 1) + " has no owner");
  }
  if (x.matroid.ground_size != x.items) throw InputError("matroid ground set must be the item set");
  validate_matroid(x.matroid, x.items);
}

inline nlohmann::json xos_to_json(const XOSInstance& x) {
  using nlohmann::json;
  json j;
  j["T"] = x.T;
  json items = json::array();
  json probs = json::array();
  json clauses = json::array();
  for (const auto& a : x.agents) {
    json its = json::array();
    for (int i : a.items) its.push_back(i + 1);
    items.push_back(its);
    probs.push_back(a.probs);
    json per_k = json::array();
    for (const auto& v : a.valuations) per_k.push_back(v.clauses);
    clauses.push_back(per_k);
  }
  j["items"] = items;
  j["probs"] = probs;
  j["clauses"] = clauses;
  j["matroid"] = matroid_to_json(x.matroid);
  j["conflicts"] = conflicts_to_json(x.conflicts, "item");
  j["metadata"] = x.metadata;
  return j;
}

inline std::string serialize_xos(const XOSInstance& x) { return canonical_dump(xos_to_json(x)); }

inline XOSInstance xos_from_json(const nlohmann::json& j) {
  using namespace json_detail;
  XOSInstance x;
  try {
    x.T = as_int(require(j, "T"), "T");
    if (x.T < 1) throw InputError("T must be >= 1");
    const auto& items = require(j, "items");
    const auto& probs = require(j, "probs");
    const auto& clauses = require(j, "clauses");
    if (!items.is_array() || static_cast<int>(items.size()) != x.T) throw InputError("'items' must have T rows");
    if (!probs.is_array() || static_cast<int>(probs.size()) != x.T) throw InputError("'probs' must have T rows");
    if (!clauses.is_array() || static_cast<int>(clauses.size()) != x.T) throw InputError("'clauses' must have T rows");
    int total = 0;
    for (const auto& row : items) total += row.is_array() ? static_cast<int>(row.size()) : 0;
    if (total > kXosMaxItems) throw InputError("item count must be in 1..14");
    x.items = total;
    x.agents.resize(static_cast<std::size_t>(x.T));
    for (int t = 0; t < x.T; ++t) {
      auto& a = x.agents[t];
      a.items = as_index_list(items[t], "items", total);
      if (!probs[t].is_array()) throw InputError("probs rows must be arrays");
      for (const auto& p : probs[t]) a.probs.push_back(as_real(p, "probs"));
      if (!clauses[t].is_array()) throw InputError("clauses rows must be arrays");
      for (const auto& per_k : clauses[t]) {
        XOSValuation v;
        if (!per_k.is_array()) throw InputError("clause lists must be arrays");
        for (const auto& c : per_k) {
          if (!c.is_array()) throw InputError("each clause must be an array of weights");
          std::vector<double> w;
          for (const auto& e : c) w.push_back(as_real(e, "clause weight"));
          v.clauses.push_back(std::move(w));
        }
        a.valuations.push_back(std::move(v));
      }
    }
    x.matroid = matroid_from_json(require(j, "matroid"), x.items);
    validate_xos(x);
    if (j.contains("conflicts")) x.conflicts = conflicts_from_json(j.at("conflicts"), "item", x.arrivals());
    if (j.contains("metadata")) {
      if (!j.at("metadata").is_string()) throw InputError("field 'metadata' must be a string");
      x.metadata = j.at("metadata").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed XOS instance: ") + e.what());
  }
  return x;
}

inline XOSInstance parse_xos_instance(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("XOS instance is not valid JSON: ") + e.what());
  }
  return xos_from_json(j);
}

inline std::uint64_t xos_realization_count(const XOSInstance& x) {
  std::uint64_t count = 1;
  for (const auto& a : x.agents) {
    const auto nz = static_cast<std::uint64_t>(
        std::count_if(a.probs.begin(), a.probs.end(), [](double p) { return p > 0.0; }));
    count *= std::max<std::uint64_t>(nz, 1);
    if (count > kRealizationLimit) return kRealizationLimit + 1;
  }
  return count;
}

struct XOSRealization {
  std::vector<int> k;
  double prob = 0.0;
  std::uint32_t proph = 0;  // prophet's item set
};

// Conditional allocation frequencies of the independent-product prophet.
struct ProphetStats {
  std::vector<std::vector<std::vector<double>>> x;  // [t][k][local subset]
  double opt = 0.0;
  std::vector<XOSRealization> realizations;
};

inline ProphetStats prophet_stats(const XOSInstance& x) {
  validate_xos(x);
  if (xos_realization_count(x) > kRealizationLimit) throw GuardError("joint realization count exceeds 10^6");
  const MatroidOracle m(x.matroid);
  const ConflictGraph g = build_graph(x.conflicts, x.arrivals());
  const FeasibleFamily fam = enumerate_feasible(m, g);
  const int T = x.T;
  // Local pieces of every feasible allocation.
  std::vector<std::vector<std::uint32_t>> pieces(fam.sets.size(), std::vector<std::uint32_t>(T));
  for (std::size_t f = 0; f < fam.sets.size(); ++f) {
    for (int t = 0; t < T; ++t) pieces[f][t] = x.to_local(t, fam.sets[f]);
  }
  // values[t][k][local subset]
  std::vector<std::vector<std::vector<double>>> values(static_cast<std::size_t>(T));
  ProphetStats st;
  st.x.resize(static_cast<std::size_t>(T));
  std::vector<std::vector<int>> support(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const auto& a = x.agents[t];
    values[t].resize(a.valuations.size());
    st.x[t].assign(a.valuations.size(), std::vector<double>(a.subsets(), 0.0));
    for (int k = 0; k < a.k_count(); ++k) {
      values[t][k].resize(a.subsets());
      for (std::uint32_t s = 0; s < a.subsets(); ++s) values[t][k][s] = a.valuations[k].value(s);
      if (a.probs[k] > 0.0) support[t].push_back(k);
    }
  }
  std::vector<int> pos(static_cast<std::size_t>(T), 0);
  std::vector<int> k(static_cast<std::size_t>(T), 0);
  while (true) {
    double prob = 1.0;
    for (int t = 0; t < T; ++t) {
      k[t] = support[t][pos[t]];
      prob *= x.agents[t].probs[k[t]];
    }
    double best = kNegInf;
    std::size_t arg = 0;
    for (std::size_t f = 0; f < fam.sets.size(); ++f) {
      double v = 0.0;
      for (int t = 0; t < T; ++t) v += values[t][k[t]][pieces[f][t]];
      if (v > best + 1e-12) {
        best = v;
        arg = f;
      } else if (v >= best - 1e-12 && prophet_prefers(fam.sets[f], fam.sets[arg])) {
        arg = f;
      }
    }
    st.opt += prob * best;
    for (int t = 0; t < T; ++t) st.x[t][k[t]][pieces[arg][t]] += prob / x.agents[t].probs[k[t]];
    st.realizations.push_back({k, prob, fam.sets[arg]});
    int t = T - 1;
    while (t >= 0 && ++pos[t] == static_cast<int>(support[t].size())) pos[t--] = 0;
    if (t < 0) break;
  }
  return st;
}

// Item prices, blocked surpluses and the restricted residual over prophet
// allocations.
class XOSPlan {
 public:
  XOSPlan(const XOSInstance& x, ProphetStats stats)
      : x_(&x),
        stats_(std::move(stats)),
        matroid_(x.matroid),
        graph_(build_graph(x.conflicts, x.arrivals())),
        owner_(x.owner()) {
    d1_ = matroid_.d1();
    pi_.assign(static_cast<std::size_t>(x.items), 0.0);
    blocked_.assign(static_cast<std::size_t>(x.items), 0.0);
    for (int t = x.T - 1; t >= 0; --t) {
      const auto& a = x.agents[t];
      for (int i : a.items) {
        double s = 0.0;
        for (int j : graph_.neighbors(i)) {
          if (owner_[j] > t) s += blocked_[j];
        }
        pi_[i] = s;
      }
      // Expected surplus the prophet collects on each of t's items.
      for (int k = 0; k < a.k_count(); ++k) {
        if (a.probs[k] <= 0.0) continue;
        for (std::uint32_t sub = 1; sub < a.subsets(); ++sub) {
          const double q = stats_.x[t][k][sub];
          if (q <= 0.0) continue;
          const auto u = supporting_prices(a.valuations[k], sub);
          for (std::uint32_t r = sub; r != 0; r &= r - 1) {
            const int j = std::countr_zero(r);
            blocked_[a.items[j]] += a.probs[k] * q * std::max(u[j] - pi_[a.items[j]], 0.0);
          }
        }
      }
    }
    for (const auto& rz : stats_.realizations) {
      Scenario sc;
      sc.prob = rz.prob;
      for (int t = 0; t < x.T; ++t) {
        const std::uint32_t local = x.to_local(t, rz.proph);
        if (local == 0) continue;
        const auto u = supporting_prices(x.agents[t].valuations[rz.k[t]], local);
        for (std::uint32_t r = local; r != 0; r &= r - 1) {
          const int j = std::countr_zero(r);
          const int item = x.agents[t].items[j];
          const double uh = u[j] - pi_[item];
          if (uh > 0.0) sc.candidates.push_back({item, uh});
        }
      }
      scenarios_.push_back(std::move(sc));
    }
  }

  const XOSInstance& instance() const { return *x_; }
  const ProphetStats& stats() const { return stats_; }
  const MatroidOracle& matroid() const { return matroid_; }
  const ConflictGraph& graph() const { return graph_; }
  const std::vector<double>& pi() const { return pi_; }
  int d1() const { return d1_; }
  double opt() const { return stats_.opt; }

  // û_t^k(i, S) for the agent's local item j.
  double uhat(int t, int k, std::uint32_t local_set, int j) const {
    const auto u = supporting_prices(x_->agents[t].valuations[k], local_set);
    return std::max(u[j] - pi_[x_->agents[t].items[j]], 0.0);
  }

  // sum_t sum_k p sum_S x(S) sum_{i in S} û(i, S)
  double closed_form() const {
    double s = 0.0;
    for (double b : blocked_) s += b;
    return s;
  }

  double residual(const ElementSet& s) const {
    if (!matroid_.is_independent(s)) return -kInf;
    double r = 0.0;
    for (const auto& sc : scenarios_) {
      if (sc.candidates.empty()) continue;
      r += sc.prob * matroid_.greedy_max_weight(sc.candidates, s).value;
    }
    return r;
  }

 private:
  struct Scenario {
    double prob = 0.0;
    std::vector<WeightedElement> candidates;
  };
  const XOSInstance* x_;
  ProphetStats stats_;
  MatroidOracle matroid_;
  ConflictGraph graph_;
  std::vector<int> owner_;
  std::vector<double> pi_;
  std::vector<double> blocked_;
  int d1_ = 0;
  std::vector<Scenario> scenarios_;
};

class XOSTauEvaluator {
 public:
  explicit XOSTauEvaluator(const XOSPlan& plan) : plan_(&plan) {}

  double residual(const ElementSet& s) {
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    if (memo_.size() > (std::size_t{1} << 20)) memo_.clear();
    const double r = plan_->residual(s);
    memo_.emplace(s, r);
    return r;
  }

  double tau(const ElementSet& add, const ElementSet& y) {
    ElementSet ys = y;
    ys |= add;
    if (!plan_->matroid().is_independent(ys)) return kInf;
    return (residual(y) - residual(ys)) / (plan_->d1() + 1);
  }

 private:
  const XOSPlan* plan_;
  std::unordered_map<ElementSet, double, ElementSetHash> memo_;
};

struct XOSRunTrace {
  std::vector<int> k;
  std::vector<std::uint32_t> allocation;  // local subsets per agent
  ElementSet allocated;                   // items
  double welfare = 0.0;
};

// At each t allocates the feasible S maximizing v(S) - sum pi - tau(S|Y).
// Surpluses within 1e-12 tie; ties go to the larger subset, then the
// lexicographically smaller one.
inline XOSRunTrace run_xos_policy(const XOSPlan& plan, const std::vector<int>& k,
                                  XOSTauEvaluator& taus) {
  const XOSInstance& x = plan.instance();
  XOSRunTrace tr{k, std::vector<std::uint32_t>(static_cast<std::size_t>(x.T), 0), ElementSet(x.items), 0.0};
  const auto& g = plan.graph();
  for (int t = 0; t < x.T; ++t) {
    const auto& a = x.agents[t];
    const auto& v = a.valuations[k[t]];
    std::uint32_t best = 0;
    double best_surplus = 0.0;
    for (std::uint32_t sub = 1; sub < a.subsets(); ++sub) {
      ElementSet s(x.items);
      bool ok = true;
      for (std::uint32_t r = sub; r != 0 && ok; r &= r - 1) {
        const int item = a.items[std::countr_zero(r)];
        if (!g.is_independent_with(tr.allocated, item) || !g.is_independent_with(s, item)) ok = false;
        s.insert(item);
      }
      if (!ok) continue;
      const double tau = taus.tau(s, tr.allocated);
      if (tau == kInf) continue;
      double surplus = v.value(sub) - tau;
      for (int item : s.members()) surplus -= plan.pi()[item];
      bool take = false;
      if (surplus > best_surplus + kTieAbsorption) {
        take = true;
      } else if (surplus >= best_surplus - kTieAbsorption) {
        const int cs = std::popcount(sub);
        const int cb = std::popcount(best);
        take = cs > cb || (cs == cb && prophet_prefers(sub, best));
      }
      if (take) {
        best = sub;
        best_surplus = surplus;
      }
    }
    tr.allocation[t] = best;
    for (std::uint32_t r = best; r != 0; r &= r - 1) tr.allocated.insert(a.items[std::countr_zero(r)]);
    tr.welfare += v.value(best);
  }
  return tr;
}

inline XOSRunTrace run_xos_policy(const XOSPlan& plan, const std::vector<int>& k) {
  XOSTauEvaluator taus(plan);
  return run_xos_policy(plan, k, taus);
}

inline std::vector<int> sample_xos_realization(const XOSInstance& x, std::uint64_t seed,
                                               std::uint64_t index) {
  Rng rng(seed, index);
  std::vector<int> k(static_cast<std::size_t>(x.T));
  for (int t = 0; t < x.T; ++t) k[t] = rng.categorical(x.agents[t].probs);
  return k;
}

struct XOSSimulation {
  SimulationSummary sim;
  double opt = 0.0;
  double restricted_prophet = 0.0;
  int d1 = 0;
  int d2 = 0;
  double bound = 0.0;  // OPT / ((d1+1)(d2+1))
};

inline XOSSimulation xos_simulate(const XOSPlan& plan, std::int64_t samples, std::uint64_t seed,
                                  int threads = 1) {
  if (samples < 1) throw InputError("samples must be >= 1");
  std::vector<double> welfare(static_cast<std::size_t>(samples));
  parallel_samples(
      samples, threads, [&] { return XOSTauEvaluator(plan); },
      [&](XOSTauEvaluator& taus, std::int64_t i) {
        welfare[i] = run_xos_policy(plan, sample_xos_realization(plan.instance(), seed, static_cast<std::uint64_t>(i)), taus).welfare;
      });
  XOSSimulation out;
  out.sim = summarize(welfare, seed, threads);
  out.opt = plan.opt();
  out.restricted_prophet = plan.closed_form();
  out.d1 = plan.d1();
  out.d2 = plan.graph().d2();
  out.bound = out.opt / ((out.d1 + 1.0) * (out.d2 + 1.0));
  return out;
}

// ---------------------------------------------------------------------------
// Constructions.

// One item per agent, one single-clause valuation per support point.
inline XOSInstance xos_from_scalar(const Instance& inst) {
  XOSInstance x;
  x.T = inst.T;
  x.items = inst.T;
  if (x.items > kXosMaxItems) throw GuardError("singleton reduction requires T <= 14");
  for (double v : inst.valuations.values) {
    if (v < 0.0) throw InputError("XOS clause weights must be >= 0");
  }
  for (int t = 0; t < inst.T; ++t) {
    XOSAgent a;
    a.items = {t};
    a.probs = inst.valuations.probs[t];
    for (double v : inst.valuations.values) a.valuations.push_back(XOSValuation{{{v}}});
    x.agents.push_back(std::move(a));
  }
  x.matroid = inst.matroid;
  x.conflicts = inst.conflicts;
  x.metadata = "singleton reduction of: " + inst.metadata;
  validate_xos(x);
  return x;
}

// An item wanted by several agents is modelled as one copy per agent with
// the copies forming a clique. groups lists the copies of each shared item.
inline XOSInstance add_clique_copies(XOSInstance x, const std::vector<std::vector<int>>& groups) {
  for (const auto& grp : groups) {
    for (std::size_t a = 0; a < grp.size(); ++a) {
      for (std::size_t b = a + 1; b < grp.size(); ++b) x.conflicts.edges.emplace_back(grp[a], grp[b]);
    }
  }
  x.conflicts = canonical_conflicts(std::move(x.conflicts), x.arrivals());
  return x;
}

// Random XOS instance: 1..max_items items per agent (capped at 14 total),
// K valuations per agent with 1..3 clauses, random matroid over items,
// Erdos-Renyi item edges and, if resources > 0, interval requests.
inline XOSInstance gen_xos_random(int T, int K, MatroidKind kind, double edge_prob, int resources,
                                  std::uint64_t seed, int max_items = 3) {
  if (T < 1 || K < 1 || max_items < 1) throw InputError("gen_xos_random: T, K, max_items must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw InputError("edge_prob must be in [0, 1]");
  Rng rng(seed, 0x786f73);
  XOSInstance x;
  x.T = T;
  for (int t = 0; t < T; ++t) {
    const int room = kXosMaxItems - x.items - (T - t - 1);
    if (room < 1) throw InputError("gen_xos_random: too many agents for 14 items");
    const int n = std::min<int>(room, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_items))));
    XOSAgent a;
    for (int j = 0; j < n; ++j) a.items.push_back(x.items++);
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
      const double w = (rng.below(4) == 0) ? 0.0 : 0.05 + rng.uniform();
      a.probs.push_back(w);
      total += w;
      XOSValuation v;
      const int c = 1 + static_cast<int>(rng.below(3));
      for (int l = 0; l < c; ++l) {
        std::vector<double> cl;
        for (int j = 0; j < n; ++j) {
          cl.push_back(rng.below(5) == 0 ? 0.0 : static_cast<double>(rng.below(1000)) / 100.0);
        }
        v.clauses.push_back(std::move(cl));
      }
      a.valuations.push_back(std::move(v));
    }
    if (total <= 0.0) {
      a.probs[0] = 1.0;
      total = 1.0;
    }
    double acc = 0.0;
    for (int k = 0; k < K; ++k) {
      a.probs[k] = (k + 1 == K) ? 1.0 - acc : a.probs[k] / total;
      acc += a.probs[k];
    }
    if (a.probs[K - 1] < 0.0) a.probs[K - 1] = 0.0;
    x.agents.push_back(std::move(a));
  }
  x.matroid = random_matroid(kind, x.items, rng);
  ConflictSpec c;
  for (int u = 0; u < x.items; ++u) {
    for (int v = u + 1; v < x.items; ++v) {
      if (rng.uniform() < edge_prob) c.edges.emplace_back(u, v);
    }
  }
  const auto arr = x.arrivals();
  if (resources > 0) {
    c.resources = resources;
    for (int i = 0; i < x.items; ++i) {
      if (rng.below(2) == 0) continue;
      const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(resources)));
      const int end = arr[i] + static_cast<int>(rng.below(static_cast<std::uint64_t>(T - arr[i] + 1)));
      c.intervals.push_back({i, j, static_cast<double>(end)});
    }
  }
  x.conflicts = canonical_conflicts(std::move(c), arr);
  x.metadata = "xos random T=" + std::to_string(T) + " K=" + std::to_string(K) + " kind=" +
               std::string(to_string(kind)) + " seed=" + std::to_string(seed);
  validate_xos(x);
  return x;
}

}  // namespace prophet
