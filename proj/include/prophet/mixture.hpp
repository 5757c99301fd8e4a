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

#include "prophet/element_set.hpp"
#include "prophet/errors.hpp"
#include "prophet/matroid.hpp"
#include "prophet/rng.hpp"
#include "prophet/simplex.hpp"

namespace prophet {

inline constexpr double kMixtureTolerance = 1e-9;
inline constexpr int kMixtureLpMaxGround = 12;

struct Atom {
  ElementSet set;
  double weight = 0.0;
};

// Convex combination of independent sets; Pr[t in sampled set] equals the
// marginal it was built for.
struct Mixture {
  std::vector<Atom> atoms;
  std::vector<double> marginals;

  std::vector<double> realized_marginals() const {
    std::vector<double> out(marginals.size(), 0.0);
    for (const auto& a : atoms) {
      for (int t : a.set.members()) out[t] += a.weight;
    }
    return out;
  }

  std::vector<double> weights() const {
    std::vector<double> w;
    w.reserve(atoms.size());
    for (const auto& a : atoms) w.push_back(a.weight);
    return w;
  }
};

enum class DecomposeMethod { kAuto, kPeel, kEnumeratedLp };

struct MixtureCheck {
  bool ok = true;
  std::string diagnostic;
};

inline MixtureCheck verify_mixture(const MatroidOracle& m, const Mixture& mix,
                                   const std::vector<double>& x,
                                   double tol = kMixtureTolerance) {
  const int n = m.ground_size();
  double total = 0.0;
  for (std::size_t i = 0; i < mix.atoms.size(); ++i) {
    const auto& a = mix.atoms[i];
    if (!m.is_independent(a.set)) {
      return {false, "atom " + std::to_string(i) + " " + a.set.to_string() + " is dependent"};
    }
    if (!(a.weight > 0.0)) return {false, "atom " + std::to_string(i) + " has non-positive weight"};
    total += a.weight;
  }
  if (std::abs(total - 1.0) > tol) {
    return {false, "weights sum to " + std::to_string(total)};
  }
  std::vector<double> got(static_cast<std::size_t>(n), 0.0);
  for (const auto& a : mix.atoms) {
    for (int t : a.set.members()) got[t] += a.weight;
  }
  for (int t = 0; t < n; ++t) {
    if (std::abs(got[t] - x[t]) > tol) {
      return {false, "marginal of element " + std::to_string(t + 1) + " is " +
                         std::to_string(got[t]) + ", expected " + std::to_string(x[t])};
    }
  }
  if (static_cast<int>(mix.atoms.size()) > n + 1) {
    return {false, std::to_string(mix.atoms.size()) + " atoms exceed n+1"};
  }
  return {};
}

namespace mixture_detail {

// Merges atoms with identical sets; atoms end up sorted by member list.
inline void compact(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return a.set.members() < b.set.members();
  });
  std::vector<Atom> out;
  for (auto& a : atoms) {
    if (!out.empty() && out.back().set == a.set) {
      out.back().weight += a.weight;
    } else {
      out.push_back(std::move(a));
    }
  }
  atoms = std::move(out);
}

// Peels off one independent set at a time. The set is chosen on the
// minimal face of the current (rescaled) residual point: it saturates every
// tight rank constraint and contains every element at 1. It is then removed
// with the largest weight that keeps the rescaled residual inside the
// polytope, which makes at least one more constraint tight per step.
inline std::optional<std::vector<Atom>> peel(const MatroidOracle& m, const std::vector<double>& x) {
  const int n = m.ground_size();
  const auto constraints = m.rank_constraints();
  std::vector<double> r(x.begin(), x.end());
  for (auto& v : r) v = std::clamp(v, 0.0, 1.0);
  double mass = 1.0;
  std::vector<Atom> atoms;
  constexpr double kTight = 1e-11;
  const int max_steps = 4 * n + 4;
  for (int step = 0; step < max_steps && mass > 0.0; ++step) {
    for (auto& v : r) {
      if (v <= kTight * mass) v = 0.0;
    }
    std::vector<int> depth(static_cast<std::size_t>(n), 0);
    std::vector<char> tight(constraints.size(), 0);
    for (std::size_t c = 0; c < constraints.size(); ++c) {
      double lhs = 0.0;
      for (int t : constraints[c].set.members()) lhs += r[t];
      if (mass * constraints[c].rank - lhs <= kTight * mass) {
        tight[c] = 1;
        for (int t : constraints[c].set.members()) ++depth[t];
      }
    }
    std::vector<char> full(static_cast<std::size_t>(n), 0);
    for (int t = 0; t < n; ++t) {
      if (r[t] >= mass * (1.0 - kTight)) {
        full[t] = 1;
        ++depth[t];
      }
    }
    std::vector<int> order;
    for (int t = 0; t < n; ++t) {
      if (r[t] > 0.0) order.push_back(t);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (depth[a] != depth[b]) return depth[a] > depth[b];
      if (r[a] != r[b]) return r[a] > r[b];
      return a < b;
    });
    MatroidOracle::Tracker tr(m);
    for (int t : order) {
      if (tr.can_add(t)) tr.add(t);
    }
    const ElementSet& s = tr.set();
    for (int t = 0; t < n; ++t) {
      if (full[t] && !s.contains(t)) return std::nullopt;
    }
    double w = mass;
    for (int t = 0; t < n; ++t) {
      w = s.contains(t) ? std::min(w, r[t]) : std::min(w, mass - r[t]);
    }
    for (std::size_t c = 0; c < constraints.size(); ++c) {
      const auto& rc = constraints[c];
      int inside = 0;
      double lhs = 0.0;
      for (int t : rc.set.members()) {
        inside += s.contains(t) ? 1 : 0;
        lhs += r[t];
      }
      if (tight[c] && inside != rc.rank) return std::nullopt;
      if (inside < rc.rank) w = std::min(w, (mass * rc.rank - lhs) / (rc.rank - inside));
    }
    if (!(w > 0.0)) return std::nullopt;
    if (w >= mass * (1.0 - 1e-14)) w = mass;
    atoms.push_back({s, w});
    for (int t : s.members()) r[t] = std::max(0.0, r[t] - w);
    mass = (w == mass) ? 0.0 : mass - w;
    // Cancellation residue; far below any tolerance the marginals are held to.
    if (mass < 1e-12) {
      atoms.back().weight += mass;
      mass = 0.0;
    }
  }
  if (mass > 0.0) return std::nullopt;
  return atoms;
}

// Solves for weights over every independent set: one equality per element
// plus the convexity row. A basic solution has at most n+1 positive weights.
inline std::vector<Atom> enumerated_lp(const MatroidOracle& m, const std::vector<double>& x) {
  const int n = m.ground_size();
  if (n > kMixtureLpMaxGround) {
    throw GuardError("enumerated decomposition requires ground set size <= 12");
  }
  const auto masks = m.independent_masks();
  lp::Problem p;
  p.num_vars = static_cast<int>(masks.size());
  p.objective.assign(masks.size(), 0.0);
  for (int t = 0; t < n; ++t) {
    lp::Row row;
    row.sense = lp::Sense::kEqual;
    row.rhs = x[t];
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (masks[i] & (std::uint32_t{1} << t)) row.coeffs.emplace_back(static_cast<int>(i), 1.0);
    }
    p.rows.push_back(std::move(row));
  }
  lp::Row convex;
  convex.sense = lp::Sense::kEqual;
  convex.rhs = 1.0;
  for (std::size_t i = 0; i < masks.size(); ++i) convex.coeffs.emplace_back(static_cast<int>(i), 1.0);
  p.rows.push_back(std::move(convex));
  const auto sol = lp::solve(p);
  if (sol.status != lp::Status::kOptimal) {
    throw SolverError("no convex combination of independent sets matches the marginals");
  }
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (sol.x[i] > 1e-15) atoms.push_back({m.mask_to_set(masks[i]), sol.x[i]});
  }
  return atoms;
}

}  // namespace mixture_detail

// Checks x against the unit bounds and the rank constraints.
inline bool in_matroid_polytope(const MatroidOracle& m, const std::vector<double>& x,
                                double tol = kMixtureTolerance) {
  if (static_cast<int>(x.size()) != m.ground_size()) return false;
  for (double v : x) {
    if (!(v >= -tol && v <= 1.0 + tol)) return false;
  }
  for (const auto& rc : m.rank_constraints()) {
    double lhs = 0.0;
    for (int t : rc.set.members()) lhs += x[t];
    if (lhs > rc.rank + tol) return false;
  }
  return true;
}

inline Mixture decompose(const MatroidOracle& m, const std::vector<double>& x,
                         DecomposeMethod method = DecomposeMethod::kAuto) {
  if (!in_matroid_polytope(m, x)) throw InputError("marginals lie outside the matroid polytope");
  Mixture mix;
  mix.marginals = x;
  if (method != DecomposeMethod::kEnumeratedLp) {
    if (auto atoms = mixture_detail::peel(m, x)) {
      mix.atoms = std::move(*atoms);
      mixture_detail::compact(mix.atoms);
      if (verify_mixture(m, mix, x).ok) return mix;
    }
    if (method == DecomposeMethod::kPeel) {
      throw SolverError("peeling decomposition failed verification");
    }
  }
  mix.atoms = mixture_detail::enumerated_lp(m, x);
  mixture_detail::compact(mix.atoms);
  const auto check = verify_mixture(m, mix, x);
  if (!check.ok) throw SolverError("enumerated decomposition failed: " + check.diagnostic);
  return mix;
}

inline const ElementSet& sample_set(const Mixture& mix, Rng& rng) {
  const auto w = mix.weights();
  return mix.atoms[static_cast<std::size_t>(rng.categorical(w))].set;
}

}  // namespace prophet
