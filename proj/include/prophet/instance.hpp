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
#include <cstdio>
#include <iterator>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "prophet/canonical_json.hpp"
#include "prophet/errors.hpp"
#include "prophet/rng.hpp"

// Problem instances: agents with discrete valuations, a matroid, and a
// conflict structure. Indices are 0-based in memory and 1-based in files.

namespace prophet {

inline constexpr double kProbSumTolerance = 1e-9;
inline constexpr int kExplicitMatroidMaxGround = 20;

// Shared support v^1..v^K and one probability row per agent.
struct ValuationTable {
  std::vector<double> values;
  std::vector<std::vector<double>> probs;

  int agents() const { return static_cast<int>(probs.size()); }
  int support_size() const { return static_cast<int>(values.size()); }

  double mean(int t) const {
    double m = 0.0;
    for (int k = 0; k < support_size(); ++k) m += values[k] * probs[t][k];
    return m;
  }

  friend bool operator==(const ValuationTable&, const ValuationTable&) = default;
};

enum class MatroidKind { kFree, kUniform, kPartition, kLaminar, kExplicit };

inline std::string_view to_string(MatroidKind kind) {
  switch (kind) {
    case MatroidKind::kFree: return "free";
    case MatroidKind::kUniform: return "uniform";
    case MatroidKind::kPartition: return "partition";
    case MatroidKind::kLaminar: return "laminar";
    case MatroidKind::kExplicit: return "explicit";
  }
  return "?";
}

inline MatroidKind matroid_kind_from_string(std::string_view s) {
  if (s == "free") return MatroidKind::kFree;
  if (s == "uniform") return MatroidKind::kUniform;
  if (s == "partition") return MatroidKind::kPartition;
  if (s == "laminar") return MatroidKind::kLaminar;
  if (s == "explicit") return MatroidKind::kExplicit;
  throw InputError("unsupported matroid kind '" + std::string(s) + "'");
}

// A subset of the ground set with an upper bound on how many of its
// members an independent set may contain.
struct CapacitySet {
  std::vector<int> members;  // sorted
  int capacity = 0;

  friend bool operator==(const CapacitySet&, const CapacitySet&) = default;
  friend auto operator<=>(const CapacitySet&, const CapacitySet&) = default;
};

struct MatroidSpec {
  MatroidKind kind = MatroidKind::kFree;
  int ground_size = 0;
  int rank = 0;                           // uniform
  std::vector<CapacitySet> sets;          // partition blocks / laminar family
  std::vector<std::vector<int>> bases;    // explicit: maximal independent sets

  static MatroidSpec free(int n) {
    MatroidSpec m;
    m.kind = MatroidKind::kFree;
    m.ground_size = n;
    return m;
  }

  static MatroidSpec uniform(int n, int r) {
    if (r < 0) throw InputError("uniform matroid rank must be >= 0");
    MatroidSpec m;
    m.kind = MatroidKind::kUniform;
    m.ground_size = n;
    m.rank = r;
    return m;
  }

  // Elements outside every block are unconstrained.
  static MatroidSpec partition(int n, std::vector<CapacitySet> blocks) {
    MatroidSpec m;
    m.kind = MatroidKind::kPartition;
    m.ground_size = n;
    m.sets = canonical_sets(n, std::move(blocks));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const auto& b : m.sets) {
      for (int e : b.members) {
        if (seen[e]) {
          throw InputError("partition blocks overlap at element " +
                           std::to_string(e + 1));
        }
        seen[e] = 1;
      }
    }
    return m;
  }

  static MatroidSpec laminar(int n, std::vector<CapacitySet> family) {
    MatroidSpec m;
    m.kind = MatroidKind::kLaminar;
    m.ground_size = n;
    m.sets = canonical_sets(n, std::move(family));
    for (std::size_t a = 0; a < m.sets.size(); ++a) {
      for (std::size_t b = a + 1; b < m.sets.size(); ++b) {
        const auto& x = m.sets[a].members;
        const auto& y = m.sets[b].members;
        std::vector<int> common;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                              std::back_inserter(common));
        if (!common.empty() && common.size() != x.size() &&
            common.size() != y.size()) {
          throw InputError("laminar family members must be nested or disjoint");
        }
      }
    }
    return m;
  }

  // Keeps only maximal sets, sorted lexicographically.
  static MatroidSpec explicit_bases(int n, std::vector<std::vector<int>> bases) {
    if (n > kExplicitMatroidMaxGround) {
      throw InputError("explicit matroid requires ground set size <= " +
                       std::to_string(kExplicitMatroidMaxGround));
    }
    for (auto& b : bases) {
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      for (int e : b) {
        if (e < 0 || e >= n) throw InputError("explicit matroid element out of range");
      }
    }
    if (bases.empty()) bases.push_back({});
    std::vector<std::vector<int>> maximal;
    for (std::size_t i = 0; i < bases.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < bases.size() && !dominated; ++j) {
        if (i == j) continue;
        const bool subset = std::includes(bases[j].begin(), bases[j].end(),
                                          bases[i].begin(), bases[i].end());
        // Strict superset, or an identical copy earlier in the list.
        if (subset && (bases[j].size() > bases[i].size() || j < i)) dominated = true;
      }
      if (!dominated) maximal.push_back(bases[i]);
    }
    std::sort(maximal.begin(), maximal.end());
    MatroidSpec m;
    m.kind = MatroidKind::kExplicit;
    m.ground_size = n;
    m.bases = std::move(maximal);
    return m;
  }

  friend bool operator==(const MatroidSpec&, const MatroidSpec&) = default;

 private:
  static std::vector<CapacitySet> canonical_sets(int n, std::vector<CapacitySet> sets) {
    for (auto& s : sets) {
      std::sort(s.members.begin(), s.members.end());
      if (std::adjacent_find(s.members.begin(), s.members.end()) != s.members.end()) {
        throw InputError("capacity set lists an element twice");
      }
      for (int e : s.members) {
        if (e < 0 || e >= n) throw InputError("matroid element out of range");
      }
      if (s.capacity < 0) throw InputError("capacity must be >= 0");
    }
    std::sort(sets.begin(), sets.end());
    return sets;
  }
};

// Request by a vertex (agent, or item in the XOS setting) for one resource
// over the closed interval [arrival, end].
struct IntervalRequest {
  int vertex = 0;
  int resource = 0;
  double end = 0.0;

  friend bool operator==(const IntervalRequest&, const IntervalRequest&) = default;
  friend auto operator<=>(const IntervalRequest&, const IntervalRequest&) = default;
};

struct ConflictSpec {
  std::vector<std::pair<int, int>> edges;  // u < v, sorted, unique
  std::vector<IntervalRequest> intervals;  // sorted by (vertex, resource)
  int resources = 0;

  bool has_explicit_edges() const { return !edges.empty(); }

  // Max number of distinct resources requested by a single vertex.
  int max_requests(int vertices) const {
    std::vector<int> per(static_cast<std::size_t>(vertices), 0);
    int best = 0;
    for (const auto& r : intervals) best = std::max(best, ++per[r.vertex]);
    return best;
  }

  friend bool operator==(const ConflictSpec&, const ConflictSpec&) = default;
};

// Sorts and validates a conflict spec. arrivals[v] is the 1-based arrival
// time of vertex v, the implicit start of each of its intervals.
inline ConflictSpec canonical_conflicts(ConflictSpec c, const std::vector<int>& arrivals) {
  const int n = static_cast<int>(arrivals.size());
  for (auto& [u, v] : c.edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("self-loop edge at " + std::to_string(u + 1));
    if (u > v) std::swap(u, v);
  }
  std::sort(c.edges.begin(), c.edges.end());
  c.edges.erase(std::unique(c.edges.begin(), c.edges.end()), c.edges.end());
  int max_resource = -1;
  for (const auto& r : c.intervals) {
    if (r.vertex < 0 || r.vertex >= n) throw InputError("interval request vertex out of range");
    if (r.resource < 0) throw InputError("resource index must be >= 1");
    if (!std::isfinite(r.end) || r.end < arrivals[r.vertex]) {
      throw InputError("interval end " + std::to_string(r.end) + " precedes arrival " +
                       std::to_string(arrivals[r.vertex]) + " of vertex " +
                       std::to_string(r.vertex + 1));
    }
    max_resource = std::max(max_resource, r.resource);
  }
  std::sort(c.intervals.begin(), c.intervals.end());
  for (std::size_t i = 1; i < c.intervals.size(); ++i) {
    if (c.intervals[i].vertex == c.intervals[i - 1].vertex &&
        c.intervals[i].resource == c.intervals[i - 1].resource) {
      throw InputError("vertex " + std::to_string(c.intervals[i].vertex + 1) +
                       " requests resource " + std::to_string(c.intervals[i].resource + 1) +
                       " twice");
    }
  }
  if (c.resources < max_resource + 1) {
    if (c.resources != 0) throw InputError("resource index exceeds declared resource count");
    c.resources = max_resource + 1;
  }
  return c;
}

inline std::vector<int> identity_arrivals(int t_count) {
  std::vector<int> a(static_cast<std::size_t>(t_count));
  std::iota(a.begin(), a.end(), 1);
  return a;
}

struct Instance {
  int T = 0;
  ValuationTable valuations;
  MatroidSpec matroid;
  ConflictSpec conflicts;
  std::string metadata;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct ParseOptions {
  bool allow_negative_values = false;
};

inline void validate_valuations(const ValuationTable& v, int t_count,
                                bool allow_negative) {
  if (v.values.empty()) throw InputError("value support must be nonempty");
  for (double x : v.values) {
    if (!std::isfinite(x)) throw InputError("support values must be finite");
    if (x < 0.0 && !allow_negative) {
      throw InputError("negative support value " + std::to_string(x) +
                       " (enable negative values explicitly)");
    }
  }
  if (v.agents() != t_count) {
    throw InputError("probs has " + std::to_string(v.agents()) + " rows, expected T=" +
                     std::to_string(t_count));
  }
  for (int t = 0; t < t_count; ++t) {
    const auto& row = v.probs[t];
    if (row.size() != v.values.size()) {
      throw InputError("agent " + std::to_string(t + 1) + ": probability row has " +
                       std::to_string(row.size()) + " entries, expected K=" +
                       std::to_string(v.values.size()));
    }
    double sum = 0.0;
    for (double p : row) {
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw InputError("agent " + std::to_string(t + 1) + ": probability outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbSumTolerance) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "agent %d: row sum %.12g != 1", t + 1, sum);
      throw InputError(buf);
    }
  }
}

inline void validate_matroid(const MatroidSpec& m, int n) {
  if (m.ground_size != n) throw InputError("matroid ground set size differs from T");
  if (m.kind == MatroidKind::kExplicit && n > kExplicitMatroidMaxGround) {
    throw InputError("explicit matroid requires T <= 20");
  }
}

inline void validate_instance(const Instance& inst, const ParseOptions& opts = {}) {
  if (inst.T < 1) throw InputError("T must be >= 1");
  validate_valuations(inst.valuations, inst.T, opts.allow_negative_values);
  validate_matroid(inst.matroid, inst.T);
}

// ---------------------------------------------------------------------------
// JSON encoding of the shared blocks (also used by the XOS schema).

namespace json_detail {

using nlohmann::json;

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

inline int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string("field '") + what + "' must be an integer");
  return j.get<int>();
}

inline double as_real(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string("field '") + what + "' must be a number");
  return j.get<double>();
}

inline std::vector<int> as_index_list(const json& j, const char* what, int n) {
  if (!j.is_array()) throw InputError(std::string("field '") + what + "' must be an array");
  std::vector<int> out;
  for (const auto& e : j) {
    const int v = as_int(e, what);
    if (v < 1 || v > n) {
      throw InputError(std::string("index ") + std::to_string(v) + " in '" + what +
                       "' outside 1.." + std::to_string(n));
    }
    out.push_back(v - 1);
  }
  return out;
}

inline json index_list(const std::vector<int>& xs) {
  json a = json::array();
  for (int x : xs) a.push_back(x + 1);
  return a;
}

}  // namespace json_detail

inline nlohmann::json matroid_to_json(const MatroidSpec& m) {
  using nlohmann::json;
  json j;
  j["kind"] = std::string(to_string(m.kind));
  switch (m.kind) {
    case MatroidKind::kFree:
      break;
    case MatroidKind::kUniform:
      j["rank"] = m.rank;
      break;
    case MatroidKind::kPartition:
    case MatroidKind::kLaminar: {
      json sets = json::array();
      for (const auto& s : m.sets) {
        json e;
        e["elements"] = json_detail::index_list(s.members);
        e["capacity"] = s.capacity;
        sets.push_back(e);
      }
      j[m.kind == MatroidKind::kPartition ? "blocks" : "sets"] = sets;
      break;
    }
    case MatroidKind::kExplicit: {
      json bases = json::array();
      for (const auto& b : m.bases) bases.push_back(json_detail::index_list(b));
      j["bases"] = bases;
      break;
    }
  }
  return j;
}

inline MatroidSpec matroid_from_json(const nlohmann::json& j, int n) {
  using namespace json_detail;
  const auto& kind_j = require(j, "kind");
  if (!kind_j.is_string()) throw InputError("field 'kind' must be a string");
  const MatroidKind kind = matroid_kind_from_string(kind_j.get<std::string>());
  auto read_sets = [&](const char* key) {
    std::vector<CapacitySet> sets;
    const auto& arr = require(j, key);
    if (!arr.is_array()) throw InputError(std::string("field '") + key + "' must be an array");
    for (const auto& s : arr) {
      CapacitySet cs;
      cs.members = as_index_list(require(s, "elements"), "elements", n);
      cs.capacity = as_int(require(s, "capacity"), "capacity");
      sets.push_back(std::move(cs));
    }
    return sets;
  };
  switch (kind) {
    case MatroidKind::kFree:
      return MatroidSpec::free(n);
    case MatroidKind::kUniform:
      return MatroidSpec::uniform(n, as_int(require(j, "rank"), "rank"));
    case MatroidKind::kPartition:
      return MatroidSpec::partition(n, read_sets("blocks"));
    case MatroidKind::kLaminar:
      return MatroidSpec::laminar(n, read_sets("sets"));
    case MatroidKind::kExplicit: {
      if (n > kExplicitMatroidMaxGround) throw InputError("explicit matroid requires T <= 20");
      std::vector<std::vector<int>> bases;
      const auto& arr = require(j, "bases");
      if (!arr.is_array()) throw InputError("field 'bases' must be an array");
      for (const auto& b : arr) bases.push_back(as_index_list(b, "bases", n));
      return MatroidSpec::explicit_bases(n, std::move(bases));
    }
  }
  throw InputError("unsupported matroid kind");
}

inline nlohmann::json conflicts_to_json(const ConflictSpec& c, const char* vertex_key) {
  using nlohmann::json;
  json j;
  json edges = json::array();
  for (const auto& [u, v] : c.edges) edges.push_back(json::array({u + 1, v + 1}));
  j["edges"] = edges;
  json intervals = json::array();
  for (const auto& r : c.intervals) {
    json e;
    e[vertex_key] = r.vertex + 1;
    e["resource"] = r.resource + 1;
    e["end"] = r.end;
    intervals.push_back(e);
  }
  j["intervals"] = intervals;
  j["resources"] = c.resources;
  return j;
}

inline ConflictSpec conflicts_from_json(const nlohmann::json& j, const char* vertex_key,
                                        const std::vector<int>& arrivals) {
  using namespace json_detail;
  const int n = static_cast<int>(arrivals.size());
  ConflictSpec c;
  if (!j.is_object()) throw InputError("field 'conflicts' must be an object");
  if (j.contains("edges")) {
    const auto& edges = j.at("edges");
    if (!edges.is_array()) throw InputError("field 'edges' must be an array");
    for (const auto& e : edges) {
      const auto pair = as_index_list(e, "edges", n);
      if (pair.size() != 2) throw InputError("each edge must list exactly two endpoints");
      c.edges.emplace_back(pair[0], pair[1]);
    }
  }
  if (j.contains("resources")) c.resources = as_int(j.at("resources"), "resources");
  if (c.resources < 0) throw InputError("resources must be >= 0");
  if (j.contains("intervals")) {
    const auto& arr = j.at("intervals");
    if (!arr.is_array()) throw InputError("field 'intervals' must be an array");
    for (const auto& e : arr) {
      IntervalRequest r;
      r.vertex = as_int(require(e, vertex_key), vertex_key) - 1;
      r.resource = as_int(require(e, "resource"), "resource") - 1;
      r.end = as_real(require(e, "end"), "end");
      if (r.vertex < 0 || r.vertex >= n) {
        throw InputError(std::string("interval '") + vertex_key + "' outside 1.." + std::to_string(n));
      }
      if (c.resources > 0 && r.resource >= c.resources) {
        throw InputError("interval resource exceeds declared resource count");
      }
      c.intervals.push_back(r);
    }
  }
  return canonical_conflicts(std::move(c), arrivals);
}

// ---------------------------------------------------------------------------

inline nlohmann::json instance_to_json(const Instance& inst) {
  using nlohmann::json;
  json j;
  j["T"] = inst.T;
  j["values"] = inst.valuations.values;
  j["probs"] = inst.valuations.probs;
  j["matroid"] = matroid_to_json(inst.matroid);
  j["conflicts"] = conflicts_to_json(inst.conflicts, "agent");
  j["metadata"] = inst.metadata;
  return j;
}

inline std::string serialize_instance(const Instance& inst) {
  return canonical_dump(instance_to_json(inst));
}

inline Instance instance_from_json(const nlohmann::json& j, const ParseOptions& opts = {}) {
  using namespace json_detail;
  Instance inst;
  inst.T = as_int(require(j, "T"), "T");
  if (inst.T < 1) throw InputError("T must be >= 1");
  const auto& values = require(j, "values");
  if (!values.is_array()) throw InputError("field 'values' must be an array");
  for (const auto& v : values) inst.valuations.values.push_back(as_real(v, "values"));
  const auto& probs = require(j, "probs");
  if (!probs.is_array()) throw InputError("field 'probs' must be an array");
  for (const auto& row : probs) {
    if (!row.is_array()) throw InputError("each 'probs' row must be an array");
    std::vector<double> r;
    for (const auto& p : row) r.push_back(as_real(p, "probs"));
    inst.valuations.probs.push_back(std::move(r));
  }
  inst.matroid = matroid_from_json(require(j, "matroid"), inst.T);
  if (j.contains("conflicts")) {
    inst.conflicts = conflicts_from_json(j.at("conflicts"), "agent", identity_arrivals(inst.T));
  }
  if (j.contains("metadata")) {
    const auto& md = j.at("metadata");
    inst.metadata = md.is_string() ? md.get<std::string>() : md.dump();
  }
  validate_instance(inst, opts);
  return inst;
}

inline Instance parse_instance(std::string_view text, const ParseOptions& opts = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed instance document: ") + e.what());
  }
  return instance_from_json(j, opts);
}

inline std::string instance_digest(const Instance& inst) {
  return content_digest(serialize_instance(inst));
}

// ---------------------------------------------------------------------------
// Generators.

// Long request by agent 1 over [1, T+1], short requests [t, t+1/2] by the
// rest, one shared resource. Agent 1 is worth (C+T*eps)/eps with
// probability eps; every other agent is worth 1.
inline Instance gen_example1(int T, double C, double eps) {
  if (T < 2) throw InputError("example1 requires T >= 2");
  if (!(C > 0.0)) throw InputError("example1 requires C > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("example1 requires 0 < eps < 1");
  Instance inst;
  inst.T = T;
  const double high = (C + T * eps) / eps;
  inst.valuations.values = {0.0, 1.0, high};
  inst.valuations.probs.assign(static_cast<std::size_t>(T), {0.0, 1.0, 0.0});
  inst.valuations.probs[0] = {1.0 - eps, 0.0, eps};
  inst.matroid = MatroidSpec::free(T);
  ConflictSpec c;
  c.resources = 1;
  c.intervals.push_back({0, 0, static_cast<double>(T + 1)});
  for (int t = 1; t < T; ++t) c.intervals.push_back({t, 0, (t + 1) + 0.5});
  inst.conflicts = canonical_conflicts(std::move(c), identity_arrivals(T));
  char buf[128];
  std::snprintf(buf, sizeof(buf), "example1 T=%d C=%.17g eps=%.17g", T, C, eps);
  inst.metadata = buf;
  return inst;
}

// Random support of K distinct points in [0, 10) (two decimals), sorted,
// and random probability rows with occasional zeros.
inline ValuationTable random_valuations(int T, int K, Rng& rng) {
  if (K < 1) throw InputError("K must be >= 1");
  ValuationTable v;
  while (static_cast<int>(v.values.size()) < K) {
    const double x = static_cast<double>(rng.below(1000)) / 100.0;
    if (std::find(v.values.begin(), v.values.end(), x) == v.values.end()) v.values.push_back(x);
  }
  std::sort(v.values.begin(), v.values.end());
  for (int t = 0; t < T; ++t) {
    std::vector<double> row(static_cast<std::size_t>(K));
    double sum = 0.0;
    for (auto& p : row) {
      p = (K > 1 && rng.below(4) == 0) ? 0.0 : 0.05 + rng.uniform();
      sum += p;
    }
    if (sum == 0.0) {
      row[rng.below(static_cast<std::uint64_t>(K))] = 1.0;
      sum = 1.0;
    }
    for (auto& p : row) p /= sum;
    v.probs.push_back(std::move(row));
  }
  return v;
}

// Bases of the graphic matroid of a multigraph whose edges are the ground
// elements.
inline std::vector<std::vector<int>> graphic_matroid_bases(
    const std::vector<std::pair<int, int>>& graph_edges, int vertices) {
  const int n = static_cast<int>(graph_edges.size());
  if (n > kExplicitMatroidMaxGround) throw GuardError("graphic matroid too large to enumerate");
  auto is_forest = [&](std::uint32_t mask) {
    std::vector<int> parent(static_cast<std::size_t>(vertices));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int e = 0; e < n; ++e) {
      if (!((mask >> e) & 1U)) continue;
      const int a = find(graph_edges[e].first);
      const int b = find(graph_edges[e].second);
      if (a == b) return false;
      parent[a] = b;
    }
    return true;
  };
  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<char> indep(total, 0);
  for (std::uint32_t s = 0; s < total; ++s) indep[s] = is_forest(s);
  std::vector<std::vector<int>> bases;
  for (std::uint32_t s = 0; s < total; ++s) {
    if (!indep[s]) continue;
    bool maximal = true;
    for (int e = 0; e < n && maximal; ++e) {
      if (!((s >> e) & 1U) && indep[s | (std::uint32_t{1} << e)]) maximal = false;
    }
    if (!maximal) continue;
    std::vector<int> b;
    for (int e = 0; e < n; ++e) {
      if ((s >> e) & 1U) b.push_back(e);
    }
    bases.push_back(std::move(b));
  }
  return bases;
}

inline MatroidSpec random_matroid(MatroidKind kind, int n, Rng& rng) {
  switch (kind) {
    case MatroidKind::kFree:
      return MatroidSpec::free(n);
    case MatroidKind::kUniform:
      return MatroidSpec::uniform(n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
    case MatroidKind::kPartition: {
      // Each element joins one of up to three blocks or stays free.
      const int blocks = 1 + static_cast<int>(rng.below(3));
      std::vector<CapacitySet> sets(static_cast<std::size_t>(blocks));
      for (int e = 0; e < n; ++e) {
        const auto b = rng.below(static_cast<std::uint64_t>(blocks + 1));
        if (static_cast<int>(b) < blocks) sets[b].members.push_back(e);
      }
      std::vector<CapacitySet> kept;
      for (auto& s : sets) {
        if (s.members.empty()) continue;
        s.capacity = 1 + static_cast<int>(rng.below(s.members.size()));
        kept.push_back(std::move(s));
      }
      return MatroidSpec::partition(n, std::move(kept));
    }
    case MatroidKind::kLaminar: {
      // A random chain or tree of nested intervals over a shuffled order.
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      for (int i = n - 1; i > 0; --i) {
        std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i + 1))]);
      }
      std::vector<CapacitySet> family;
      struct Range { int lo, hi; };
      std::vector<Range> stack{{0, n}};
      while (!stack.empty()) {
        const Range r = stack.back();
        stack.pop_back();
        const int len = r.hi - r.lo;
        if (len <= 0) continue;
        if (len == n || rng.below(3) != 0) {
          CapacitySet cs;
          cs.members.assign(order.begin() + r.lo, order.begin() + r.hi);
          cs.capacity = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(len)));
          family.push_back(std::move(cs));
        }
        if (len >= 2) {
          const int cut = r.lo + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(len - 1)));
          stack.push_back({r.lo, cut});
          if (rng.below(2) == 0) stack.push_back({cut, r.hi});
        }
      }
      return MatroidSpec::laminar(n, std::move(family));
    }
    case MatroidKind::kExplicit: {
      // Graphic matroid of a random multigraph: not laminar in general.
      const int vertices = std::max(2, (n + 3) / 2);
      std::vector<std::pair<int, int>> g;
      for (int e = 0; e < n; ++e) {
        int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(vertices)));
        int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(vertices - 1)));
        if (b >= a) ++b;
        g.emplace_back(a, b);
      }
      return MatroidSpec::explicit_bases(n, graphic_matroid_bases(g, vertices));
    }
  }
  return MatroidSpec::free(n);
}

// d-dimensional interval scheduling: each agent requests between 1 and d
// of the J resources, each until a uniform end time in [t, T].
inline Instance gen_interval_instance(int T, int J, int d, int K, std::uint64_t seed) {
  if (T < 1) throw InputError("T must be >= 1");
  if (d < 0 || d > J) throw InputError("interval generator requires 0 <= d <= J");
  if (K < 1) throw InputError("K must be >= 1");
  Rng rng(seed, 0x1e7e5);
  Instance inst;
  inst.T = T;
  inst.valuations = random_valuations(T, K, rng);
  inst.matroid = MatroidSpec::free(T);
  ConflictSpec c;
  c.resources = J;
  if (d > 0) {
    for (int t = 0; t < T; ++t) {
      const int want = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
      std::vector<int> pool(static_cast<std::size_t>(J));
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < want; ++i) {
        const int pick = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(J - i)));
        std::swap(pool[i], pool[pick]);
        const double start = t + 1;
        const double end = start + rng.uniform() * (T - start);
        c.intervals.push_back({t, pool[i], end});
      }
    }
  }
  inst.conflicts = canonical_conflicts(std::move(c), identity_arrivals(T));
  inst.metadata = "interval T=" + std::to_string(T) + " J=" + std::to_string(J) +
                  " d=" + std::to_string(d) + " K=" + std::to_string(K) +
                  " seed=" + std::to_string(seed);
  return inst;
}

inline Instance gen_random(int T, int K, MatroidKind kind, double edge_prob, std::uint64_t seed) {
  if (T < 1) throw InputError("T must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw InputError("edge_prob must lie in [0,1]");
  if (kind == MatroidKind::kExplicit && T > kExplicitMatroidMaxGround) {
    throw InputError("explicit matroid requires T <= 20");
  }
  Rng rng(seed, 0xfa22);
  Instance inst;
  inst.T = T;
  inst.valuations = random_valuations(T, K, rng);
  inst.matroid = random_matroid(kind, T, rng);
  ConflictSpec c;
  for (int u = 0; u < T; ++u) {
    for (int v = u + 1; v < T; ++v) {
      if (rng.uniform() < edge_prob) c.edges.emplace_back(u, v);
    }
  }
  inst.conflicts = canonical_conflicts(std::move(c), identity_arrivals(T));
  inst.metadata = "random T=" + std::to_string(T) + " K=" + std::to_string(K) + " matroid=" +
                  std::string(to_string(kind)) + " seed=" + std::to_string(seed);
  return inst;
}

}  // namespace prophet
