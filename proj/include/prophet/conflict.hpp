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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prophet/element_set.hpp"
#include "prophet/errors.hpp"
#include "prophet/instance.hpp"

namespace prophet {

inline constexpr int kAlphaMaxVertices = 25;
inline constexpr int kExplicitEdgeSource = -1;

struct ConflictEdge {
  int u = 0;
  int v = 0;
  int source = kExplicitEdgeSource;  // resource index for overlap edges
};

// Conflict graph over vertices with known arrival times. In the scalar
// setting vertices are agents and arrival(t) = t; in the XOS setting
// vertices are items and arrival is the owning agent's time.
class ConflictGraph {
 public:
  ConflictGraph() = default;
  explicit ConflictGraph(std::vector<int> arrivals)
      : arrival_(std::move(arrivals)), adj_(arrival_.size()) {}

  int size() const { return static_cast<int>(arrival_.size()); }
  int arrival(int v) const { return arrival_[v]; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  const std::vector<ConflictEdge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool adjacent(int u, int v) const {
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

  // Adds an undirected edge unless present; self-loops are ignored.
  void add_edge(int u, int v, int source) {
    if (u == v || adjacent(u, v)) return;
    if (u > v) std::swap(u, v);
    adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
    adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
    edges_.push_back({u, v, source});
  }

  // True iff no neighbor of t lies in y.
  bool is_independent_with(const ElementSet& y, int t) const {
    for (int u : adj_[t]) {
      if (y.contains(u)) return false;
    }
    return true;
  }

  bool is_independent(const ElementSet& s) const {
    for (const auto& e : edges_) {
      if (s.contains(e.u) && s.contains(e.v)) return false;
    }
    return true;
  }

  // Neighbors that arrive strictly before v.
  std::vector<int> earlier_neighbors(int v) const {
    std::vector<int> out;
    for (int u : adj_[v]) {
      if (arrival_[u] < arrival_[v]) out.push_back(u);
    }
    return out;
  }

  // Independence number of the induced subgraph on s, by branch and bound.
  int alpha(const std::vector<int>& s) const {
    if (static_cast<int>(s.size()) > kAlphaMaxVertices) {
      throw GuardError("alpha: induced subgraph has " + std::to_string(s.size()) +
                       " vertices (limit 25); use d_bound_intervals for interval instances");
    }
    const auto local = local_adjacency(s);
    MisSearch search{local, 0};
    const std::uint32_t all = s.empty() ? 0 : (std::uint32_t{0xffffffffu} >> (32 - s.size()));
    search.best = greedy_independent(local, all);
    search.run(all, 0);
    return search.best;
  }

  // max_v alpha(G[earlier neighbors of v]).
  int d2() const {
    int best = 0;
    for (int v = 0; v < size(); ++v) best = std::max(best, alpha(earlier_neighbors(v)));
    return best;
  }

  // Maximal cliques of the induced subgraph on s (Bron-Kerbosch with
  // pivoting), as vertex lists. Stops after max_cliques.
  std::vector<std::vector<int>> maximal_cliques(const std::vector<int>& s,
                                                std::size_t max_cliques = 4096) const {
    if (static_cast<int>(s.size()) > kAlphaMaxVertices) {
      throw GuardError("maximal_cliques: vertex set exceeds 25");
    }
    const auto local = local_adjacency(s);
    std::vector<std::vector<int>> out;
    const std::uint32_t all = s.empty() ? 0 : (std::uint32_t{0xffffffffu} >> (32 - s.size()));
    bron_kerbosch(local, 0, all, 0, out, max_cliques);
    for (auto& c : out) {
      for (int& x : c) x = s[x];
      std::sort(c.begin(), c.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<std::uint32_t> local_adjacency(const std::vector<int>& s) const {
    std::vector<std::uint32_t> local(s.size(), 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (adjacent(s[i], s[j])) {
          local[i] |= std::uint32_t{1} << j;
          local[j] |= std::uint32_t{1} << i;
        }
      }
    }
    return local;
  }

  static int greedy_independent(const std::vector<std::uint32_t>& adj, std::uint32_t cand) {
    int size = 0;
    while (cand != 0) {
      int pick = -1;
      int pick_deg = 64;
      for (std::uint32_t c = cand; c != 0; c &= c - 1) {
        const int v = std::countr_zero(c);
        const int deg = std::popcount(adj[v] & cand);
        if (deg < pick_deg) {
          pick = v;
          pick_deg = deg;
        }
      }
      cand &= ~(adj[pick] | (std::uint32_t{1} << pick));
      ++size;
    }
    return size;
  }

  struct MisSearch {
    const std::vector<std::uint32_t>& adj;
    int best;

    void run(std::uint32_t cand, int taken) {
      // Vertices of degree <= 1 belong to some maximum independent set.
      bool reduced = true;
      while (reduced && cand != 0) {
        reduced = false;
        for (std::uint32_t c = cand; c != 0; c &= c - 1) {
          const int v = std::countr_zero(c);
          if (std::popcount(adj[v] & cand) <= 1) {
            cand &= ~(adj[v] | (std::uint32_t{1} << v));
            ++taken;
            reduced = true;
            break;
          }
        }
      }
      if (cand == 0) {
        best = std::max(best, taken);
        return;
      }
      if (taken + std::popcount(cand) <= best) return;
      int pivot = -1;
      int pivot_deg = -1;
      for (std::uint32_t c = cand; c != 0; c &= c - 1) {
        const int v = std::countr_zero(c);
        const int deg = std::popcount(adj[v] & cand);
        if (deg > pivot_deg) {
          pivot = v;
          pivot_deg = deg;
        }
      }
      const std::uint32_t bit = std::uint32_t{1} << pivot;
      run(cand & ~(adj[pivot] | bit), taken + 1);
      run(cand & ~bit, taken);
    }
  };

  static void bron_kerbosch(const std::vector<std::uint32_t>& adj, std::uint32_t r,
                            std::uint32_t p, std::uint32_t x,
                            std::vector<std::vector<int>>& out, std::size_t cap) {
    if (out.size() >= cap) return;
    if (p == 0 && x == 0) {
      std::vector<int> clique;
      for (std::uint32_t c = r; c != 0; c &= c - 1) clique.push_back(std::countr_zero(c));
      if (!clique.empty()) out.push_back(std::move(clique));
      return;
    }
    const std::uint32_t px = p | x;
    const int pivot = std::countr_zero(px);
    std::uint32_t todo = p & ~adj[pivot];
    while (todo != 0) {
      const int v = std::countr_zero(todo);
      const std::uint32_t bit = std::uint32_t{1} << v;
      bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out, cap);
      p &= ~bit;
      x |= bit;
      todo &= ~bit;
    }
  }

  std::vector<int> arrival_;
  std::vector<std::vector<int>> adj_;
  std::vector<ConflictEdge> edges_;
};

// Union of explicit edges and interval-overlap edges: two vertices that
// request the same resource are adjacent iff their closed intervals
// [arrival, end] intersect.
inline ConflictGraph build_graph(const ConflictSpec& c, const std::vector<int>& arrivals) {
  ConflictGraph g(arrivals);
  for (const auto& [u, v] : c.edges) g.add_edge(u, v, kExplicitEdgeSource);
  std::map<int, std::vector<IntervalRequest>> by_resource;
  for (const auto& r : c.intervals) by_resource[r.resource].push_back(r);
  for (const auto& [resource, reqs] : by_resource) {
    for (std::size_t a = 0; a < reqs.size(); ++a) {
      for (std::size_t b = a + 1; b < reqs.size(); ++b) {
        const double lo = std::max<double>(arrivals[reqs[a].vertex], arrivals[reqs[b].vertex]);
        const double hi = std::min(reqs[a].end, reqs[b].end);
        if (lo <= hi) g.add_edge(reqs[a].vertex, reqs[b].vertex, resource);
      }
    }
  }
  return g;
}

inline ConflictGraph build_graph(const ConflictSpec& c, int t_count) {
  return build_graph(c, identity_arrivals(t_count));
}

// Certified upper bound on d2 for graphs induced purely by interval
// requests: the largest number of resources any single vertex requests.
inline int d_bound_intervals(const ConflictSpec& c, int vertices) {
  if (c.has_explicit_edges()) {
    throw InputError("d_bound_intervals: explicit edges present, the interval bound is not certified");
  }
  return c.max_requests(vertices);
}

}  // namespace prophet
