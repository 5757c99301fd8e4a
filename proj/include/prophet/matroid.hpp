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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prophet/element_set.hpp"
#include "prophet/errors.hpp"
#include "prophet/instance.hpp"

namespace prophet {

struct WeightedElement {
  int element = 0;
  double weight = 0.0;
};

struct GreedyResult {
  ElementSet chosen;
  double value = 0.0;
};

struct RankConstraint {
  ElementSet set;
  int rank = 0;
};

inline constexpr int kExchangeCheckMaxGround = 12;

// Independence and rank oracle. Free, uniform, partition and laminar
// matroids share one representation, a laminar family of capacity sets;
// explicit matroids are tabulated over all 2^n subsets.
class MatroidOracle {
 public:
  // Incremental independence test along a growing independent set.
  class Tracker {
   public:
    explicit Tracker(const MatroidOracle& m)
        : m_(&m), counts_(m.family_.size(), 0), set_(m.ground_size()) {}

    bool can_add(int e) const {
      if (set_.contains(e)) return true;
      if (m_->is_explicit()) return m_->indep_[mask_ | (std::uint32_t{1} << e)] != 0;
      for (int f : m_->containing_[e]) {
        if (counts_[f] >= m_->family_[f].capacity) return false;
      }
      return true;
    }

    void add(int e) {
      if (set_.contains(e)) return;
      set_.insert(e);
      if (m_->is_explicit()) {
        mask_ |= std::uint32_t{1} << e;
        return;
      }
      for (int f : m_->containing_[e]) ++counts_[f];
    }

    const ElementSet& set() const { return set_; }

   private:
    const MatroidOracle* m_;
    std::vector<int> counts_;
    std::uint32_t mask_ = 0;
    ElementSet set_;
  };

  MatroidOracle() : MatroidOracle(MatroidSpec::free(0)) {}

  explicit MatroidOracle(MatroidSpec spec) : spec_(std::move(spec)) {
    const int n = spec_.ground_size;
    containing_.assign(static_cast<std::size_t>(n), {});
    switch (spec_.kind) {
      case MatroidKind::kFree:
        break;
      case MatroidKind::kUniform: {
        CapacitySet all;
        for (int e = 0; e < n; ++e) all.members.push_back(e);
        all.capacity = spec_.rank;
        family_.push_back(std::move(all));
        break;
      }
      case MatroidKind::kPartition:
      case MatroidKind::kLaminar:
        family_ = spec_.sets;
        break;
      case MatroidKind::kExplicit:
        build_explicit_tables();
        break;
    }
    for (int f = 0; f < static_cast<int>(family_.size()); ++f) {
      for (int e : family_[f].members) containing_[e].push_back(f);
    }
  }

  const MatroidSpec& spec() const { return spec_; }
  int ground_size() const { return spec_.ground_size; }
  bool is_explicit() const { return spec_.kind == MatroidKind::kExplicit; }
  // False only for explicit matroids too large for the exchange-axiom check.
  bool exchange_verified() const { return exchange_verified_; }

  bool is_independent(const ElementSet& s) const {
    if (is_explicit()) return indep_[static_cast<std::uint32_t>(s.low_word())] != 0;
    for (const auto& f : family_) {
      int c = 0;
      for (int e : f.members) c += s.contains(e) ? 1 : 0;
      if (c > f.capacity) return false;
    }
    return true;
  }

  int rank(const ElementSet& s) const {
    if (is_explicit()) return rank_[static_cast<std::uint32_t>(s.low_word())];
    Tracker tr(*this);
    int r = 0;
    for (int e : s.members()) {
      if (tr.can_add(e)) {
        tr.add(e);
        ++r;
      }
    }
    return r;
  }

  // Max-weight S within the candidates such that S u base is independent.
  // Candidates already in base are free to take. Ties in weight go to the
  // smaller element index.
  GreedyResult greedy_max_weight(std::span<const WeightedElement> candidates,
                                 const ElementSet& base) const {
    Tracker tr(*this);
    for (int e : base.members()) {
      if (!tr.can_add(e)) throw InputError("infeasible base " + base.to_string());
      tr.add(e);
    }
    std::vector<WeightedElement> order(candidates.begin(), candidates.end());
    std::sort(order.begin(), order.end(), [](const WeightedElement& a, const WeightedElement& b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return a.element < b.element;
    });
    GreedyResult out{ElementSet(ground_size()), 0.0};
    for (const auto& c : order) {
      if (tr.can_add(c.element)) {
        tr.add(c.element);
        out.chosen.insert(c.element);
        out.value += c.weight;
      }
    }
    return out;
  }

  // 0 when every subset is independent, 1 otherwise.
  int d1() const { return is_independent(ElementSet::full(ground_size())) ? 0 : 1; }

  // Constraints sum_{t in S} x_t <= rank(S) which, with 0 <= x <= 1,
  // describe the matroid polytope.
  std::vector<RankConstraint> rank_constraints() const {
    const int n = ground_size();
    std::vector<RankConstraint> out;
    if (!is_explicit()) {
      for (const auto& f : family_) {
        out.push_back({ElementSet::from_members(n, f.members), f.capacity});
      }
      return out;
    }
    // Only closed sets whose rank is below their size; every other
    // constraint is implied by these and the unit bounds.
    const std::uint32_t total = std::uint32_t{1} << n;
    for (std::uint32_t s = 1; s < total; ++s) {
      const int r = rank_[s];
      if (r >= std::popcount(s)) continue;
      bool closed = true;
      for (int e = 0; e < n && closed; ++e) {
        const std::uint32_t bit = std::uint32_t{1} << e;
        if (!(s & bit) && rank_[s | bit] == r) closed = false;
      }
      if (!closed) continue;
      ElementSet set(n);
      for (int e = 0; e < n; ++e) {
        if (s & (std::uint32_t{1} << e)) set.insert(e);
      }
      out.push_back({std::move(set), r});
    }
    return out;
  }

  // Every independent set, as masks.
  std::vector<std::uint32_t> independent_masks() const {
    if (ground_size() > kExplicitMatroidMaxGround) {
      throw GuardError("independent-set enumeration requires ground set size <= 20");
    }
    std::vector<std::uint32_t> out;
    const std::uint32_t total = std::uint32_t{1} << ground_size();
    for (std::uint32_t s = 0; s < total; ++s) {
      if (is_explicit() ? indep_[s] != 0 : is_independent(mask_to_set(s))) out.push_back(s);
    }
    return out;
  }

  ElementSet mask_to_set(std::uint32_t s) const {
    ElementSet set(ground_size());
    for (int e = 0; e < ground_size(); ++e) {
      if (s & (std::uint32_t{1} << e)) set.insert(e);
    }
    return set;
  }

 private:
  void build_explicit_tables() {
    const int n = spec_.ground_size;
    if (n > kExplicitMatroidMaxGround) {
      throw GuardError("explicit matroid requires ground set size <= 20");
    }
    const std::uint32_t total = std::uint32_t{1} << n;
    indep_.assign(total, 0);
    for (const auto& b : spec_.bases) {
      std::uint32_t m = 0;
      for (int e : b) m |= std::uint32_t{1} << e;
      indep_[m] = 1;
    }
    // Downward closure, largest masks first.
    for (std::uint32_t s = total; s-- > 0;) {
      if (indep_[s]) continue;
      for (int e = 0; e < n; ++e) {
        const std::uint32_t bit = std::uint32_t{1} << e;
        if (!(s & bit) && indep_[s | bit]) {
          indep_[s] = 1;
          break;
        }
      }
    }
    rank_.assign(total, 0);
    for (std::uint32_t s = 1; s < total; ++s) {
      if (indep_[s]) {
        rank_[s] = static_cast<std::uint8_t>(std::popcount(s));
        continue;
      }
      std::uint8_t best = 0;
      for (int e = 0; e < n; ++e) {
        const std::uint32_t bit = std::uint32_t{1} << e;
        if (s & bit) best = std::max(best, rank_[s ^ bit]);
      }
      rank_[s] = best;
    }
    if (n <= kExchangeCheckMaxGround) {
      verify_exchange();
      exchange_verified_ = true;
    } else {
      exchange_verified_ = false;
    }
  }

  // |I| = |J| + 1 implies some e in I \ J with J + e independent.
  void verify_exchange() const {
    const std::uint32_t total = std::uint32_t{1} << spec_.ground_size;
    std::vector<std::uint32_t> family;
    for (std::uint32_t s = 0; s < total; ++s) {
      if (indep_[s]) family.push_back(s);
    }
    for (std::uint32_t big : family) {
      const int size = std::popcount(big);
      for (std::uint32_t small : family) {
        if (std::popcount(small) + 1 != size) continue;
        std::uint32_t diff = big & ~small;
        bool ok = false;
        while (diff != 0 && !ok) {
          const std::uint32_t bit = diff & (~diff + 1);
          ok = indep_[small | bit] != 0;
          diff ^= bit;
        }
        if (!ok) throw InputError("explicit family violates the matroid exchange axiom");
      }
    }
  }

  MatroidSpec spec_;
  std::vector<CapacitySet> family_;
  std::vector<std::vector<int>> containing_;
  std::vector<std::uint8_t> indep_;
  std::vector<std::uint8_t> rank_;
  bool exchange_verified_ = true;
};

}  // namespace prophet
