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

#include <cstdio>
#include <string>

#include "json.hpp"
#include "prophet/canonical_json.hpp"
#include "prophet/exante.hpp"
#include "prophet/instance.hpp"
#include "prophet/mixture.hpp"
#include "prophet/policy.hpp"
#include "prophet/verify.hpp"
#include "prophet/xos.hpp"

namespace prophet {

// Reports keep insertion order so the layout is fixed.
using Report = nlohmann::ordered_json;

inline Report instance_block(const Instance& inst) {
  Report j;
  j["digest"] = instance_digest(inst);
  j["T"] = inst.T;
  j["K"] = inst.valuations.support_size();
  j["matroid"] = std::string(to_string(inst.matroid.kind));
  j["metadata"] = inst.metadata;
  return j;
}

inline Report simulation_block(const SimulationSummary& s) {
  Report j;
  j["samples"] = s.samples;
  j["seed"] = s.seed;
  j["threads"] = s.threads;
  j["mean"] = s.mean;
  j["std"] = s.stddev;
  j["radius_3sigma"] = s.radius;
  return j;
}

inline Report d2_block(const D2Value& d) {
  Report j;
  j["value"] = d.value;
  j["source"] = to_string(d.source);
  return j;
}

inline Report mixture_block(const Mixture& mix) {
  Report atoms = Report::array();
  for (const auto& a : mix.atoms) {
    Report e;
    Report members = Report::array();
    for (int t : a.set.members()) members.push_back(t + 1);
    e["agents"] = members;
    e["weight"] = a.weight;
    atoms.push_back(e);
  }
  return atoms;
}

inline Report check_block(const CheckResult& c) {
  Report j;
  j["check"] = c.name;
  j["status"] = c.skipped ? "skipped" : (c.pass ? "pass" : "fail");
  if (!c.skipped) {
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["margin"] = c.margin();
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline Report verification_block(const InstanceVerification& v) {
  Report j;
  j["metadata"] = v.label;
  j["digest"] = v.digest;
  j["T"] = v.T;
  j["lp_objective"] = v.lp;
  j["restricted_prophet"] = v.restricted;
  j["d1"] = v.d1;
  j["d2"] = d2_block(v.d2);
  if (v.opt) j["opt"] = *v.opt;
  j["policy"] = simulation_block(v.sim);
  j["mixture_atoms"] = v.atoms;
  Report checks = Report::array();
  for (const auto& c : v.checks) checks.push_back(check_block(c));
  j["checks"] = checks;
  j["pass"] = v.pass();
  return j;
}

inline Report xos_verification_block(const XOSVerification& v) {
  Report j;
  j["metadata"] = v.label;
  j["opt"] = v.sim.opt;
  j["restricted_prophet"] = v.sim.restricted_prophet;
  j["d1"] = v.sim.d1;
  j["d2"] = v.sim.d2;
  j["policy"] = simulation_block(v.sim.sim);
  Report checks = Report::array();
  for (const auto& c : v.checks) checks.push_back(check_block(c));
  j["checks"] = checks;
  j["pass"] = v.pass();
  return j;
}

inline std::string render_json(const Report& r) { return canonical_dump(r) + "\n"; }

namespace report_detail {

inline std::string scalar_text(const Report& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v.get<double>());
    return buf;
  }
  return v.dump();
}

inline void flatten(const Report& v, const std::string& path, std::string& out) {
  if (v.is_object()) {
    for (const auto& [k, e] : v.items()) flatten(e, path.empty() ? k : path + "." + k, out);
  } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", out);
  } else if (v.is_array()) {
    std::string line;
    for (const auto& e : v) line += (line.empty() ? "" : " ") + scalar_text(e);
    out += path;
    out.append(path.size() < 40 ? 40 - path.size() : 1, ' ');
    out += line + "\n";
  } else {
    out += path;
    out.append(path.size() < 40 ? 40 - path.size() : 1, ' ');
    out += scalar_text(v) + "\n";
  }
}

}  // namespace report_detail

// Two-column key/value rendering of a report.
inline std::string render_table(const Report& r) {
  std::string out;
  report_detail::flatten(r, "", out);
  return out;
}

}  // namespace prophet
