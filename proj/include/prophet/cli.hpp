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

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prophet/errors.hpp"
#include "prophet/exante.hpp"
#include "prophet/instance.hpp"
#include "prophet/mixture.hpp"
#include "prophet/oracle.hpp"
#include "prophet/policy.hpp"
#include "prophet/report.hpp"
#include "prophet/verify.hpp"
#include "prophet/xos.hpp"

namespace prophet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInputError = 2;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

inline DecomposeMethod decompose_method(const std::string& s) {
  if (s == "auto") return DecomposeMethod::kAuto;
  if (s == "peel") return DecomposeMethod::kPeel;
  if (s == "lp") return DecomposeMethod::kEnumeratedLp;
  throw InputError("unknown decomposition method " + s);
}

struct Options {
  // gen
  bool example1 = false, interval = false, random = false, xos = false;
  int T = 5, J = 2, d = 1, K = 2, resources = 0;
  double C = 2.5, eps = 1e-4, edge_prob = 0.3;
  std::string kind = "uniform";
  std::string output;
  // shared
  std::string file;
  std::int64_t samples = 10'000;
  std::uint64_t seed = 1;
  int threads = 1;
  bool json = false;
  bool allow_negative = false;
  // solve
  bool emit_mixture = false;
  std::string decompose = "auto";
  // compare-baseline
  double gamma = kDefaultGamma;
  bool exact_only = false;
  // verify
  std::string suite = "fuzz";
  int count = -1;
};

inline Instance load_instance(const Options& o) {
  return parse_instance(read_file(o.file), ParseOptions{o.allow_negative});
}

inline void emit(const Report& r, const Options& o, std::ostream& out, double wall_seconds) {
  if (o.json) {
    out << render_json(r);
    return;
  }
  out << render_table(r);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-40s%.3f\n", "wall_time_s", wall_seconds);
  out << buf;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

inline Report opt_block(const std::optional<OptValue>& opt) {
  Report j;
  if (opt) {
    j["value"] = opt->value;
    j["source"] = to_string(opt->source);
  } else {
    j["value"] = nullptr;
    j["source"] = "beyond guard";
  }
  return j;
}

inline int cmd_gen(const Options& o, Context& ctx) {
  const int picked = int{o.example1} + int{o.interval} + int{o.random} + int{o.xos};
  if (picked != 1) throw InputError("gen: choose exactly one of --example1, --interval, --random, --xos");
  std::string text;
  if (o.example1) {
    text = serialize_instance(gen_example1(o.T, o.C, o.eps));
  } else if (o.interval) {
    text = serialize_instance(gen_interval_instance(o.T, o.J, o.d, o.K, o.seed));
  } else if (o.random) {
    text = serialize_instance(gen_random(o.T, o.K, matroid_kind_from_string(o.kind), o.edge_prob, o.seed));
  } else {
    text = serialize_xos(gen_xos_random(o.T, o.K, matroid_kind_from_string(o.kind), o.edge_prob, o.resources, o.seed));
  }
  write_output(o.output, text + "\n", ctx.out);
  return kExitOk;
}

inline int cmd_solve(const Options& o, Context& ctx) {
  const Instance inst = load_instance(o);
  const MatroidOracle m(inst.matroid);
  const ConflictGraph g = build_graph(inst.conflicts, inst.T);
  const ExAnteSolution ex = solve_exante(inst, m, g);
  Mixture mix = decompose(m, ex.x_star, decompose_method(o.decompose));
  const auto check = verify_mixture(m, mix, ex.x_star);
  const PricePlan plan(m, g, ex.x_star, ex.y_star, mix);
  Report r;
  r["command"] = "solve";
  r["instance"] = instance_block(inst);
  Report lp;
  lp["objective"] = ex.objective;
  lp["objective_before_normalization"] = ex.objective_before_normalization;
  Report rows;
  for (RowKind k : {RowKind::kRank, RowKind::kInterval, RowKind::kClique, RowKind::kNeighborhood}) {
    rows[to_string(k)] = ex.model.count(k);
  }
  lp["rows"] = rows;
  lp["generation_rounds"] = ex.generation_rounds;
  lp["max_violation"] = ex.max_violation();
  r["lp"] = lp;
  r["d1"] = m.d1();
  r["d2"] = d2_block(d2_for_report(inst, g));
  r["x_star"] = ex.x_star;
  r["y_star"] = ex.y_star;
  r["pi"] = plan.pi();
  r["restricted_prophet"] = plan.closed_form();
  r["restricted_prophet_atomwise"] = plan.residual(ElementSet(inst.T));
  Report mx;
  mx["method"] = o.decompose;
  mx["atoms"] = mix.atoms.size();
  mx["verified"] = check.ok;
  if (!check.ok) mx["diagnostic"] = check.diagnostic;
  if (o.emit_mixture) mx["sets"] = mixture_block(mix);
  r["mixture"] = mx;
  emit(r, o, ctx.out, ctx.elapsed());
  return check.ok ? kExitOk : kExitVerifyFailed;
}

struct PolicyRun {
  ExAnteSolution ex;
  std::optional<PricePlan> plan;
  D2Value d2;
  SimulationSummary sim;
};

inline PolicyRun run_policy_pipeline(const Instance& inst, const Options& o) {
  PolicyRun p;
  const MatroidOracle m(inst.matroid);
  const ConflictGraph g = build_graph(inst.conflicts, inst.T);
  p.ex = solve_exante(inst, m, g);
  p.d2 = d2_for_report(inst, g);
  p.plan.emplace(m, g, p.ex.x_star, p.ex.y_star, decompose(m, p.ex.x_star, decompose_method(o.decompose)));
  p.sim = simulate(*p.plan, inst.valuations, o.samples, o.seed, o.threads);
  return p;
}

inline void fill_policy_fields(Report& r, const PolicyRun& p) {
  r["lp_objective"] = p.ex.objective;
  r["d1"] = p.plan->d1();
  r["d2"] = d2_block(p.d2);
  r["restricted_prophet"] = p.plan->closed_form();
  r["policy"] = simulation_block(p.sim);
}

inline int cmd_simulate(const Options& o, Context& ctx) {
  const Instance inst = load_instance(o);
  const PolicyRun p = run_policy_pipeline(inst, o);
  const auto opt = opt_within_guard(inst);
  Report r;
  r["command"] = "simulate";
  r["instance"] = instance_block(inst);
  fill_policy_fields(r, p);
  r["opt"] = opt_block(opt);
  Report ratios;
  const double guarantee = 1.0 / ((p.plan->d1() + 1.0) * (p.d2.value + 1.0));
  ratios["guarantee"] = guarantee;
  ratios["policy_over_lp"] = p.sim.mean / p.ex.objective;
  ratios["policy_over_restricted"] = p.sim.mean / p.plan->closed_form();
  if (opt) ratios["policy_over_opt"] = p.sim.mean / opt->value;
  r["ratios"] = ratios;
  emit(r, o, ctx.out, ctx.elapsed());
  return kExitOk;
}

inline int cmd_compare(const Options& o, Context& ctx) {
  if (!(o.gamma > 0.0)) throw InputError("gamma must be > 0");
  const Instance inst = load_instance(o);
  const PolicyRun p = run_policy_pipeline(inst, o);
  const BaselineSummary b = simulate_baseline(inst, o.gamma, o.samples, o.seed, o.threads, !o.exact_only);
  const auto opt = opt_within_guard(inst);
  Report r;
  r["command"] = "compare-baseline";
  r["instance"] = instance_block(inst);
  fill_policy_fields(r, p);
  Report base;
  base["gamma"] = o.gamma;
  base["residual"] = b.monte_carlo ? "monte-carlo" : "exact";
  base["residual_samples"] = b.residual_samples;
  const Report sim = simulation_block(b.sim);
  for (const auto& [k, v] : sim.items()) base[k] = v;
  r["baseline"] = base;
  r["opt"] = opt_block(opt);
  Report ratios;
  ratios["guarantee"] = 1.0 / ((p.plan->d1() + 1.0) * (p.d2.value + 1.0));
  if (opt) {
    ratios["policy_over_opt"] = p.sim.mean / opt->value;
    ratios["baseline_over_opt"] = b.sim.mean / opt->value;
  }
  ratios["policy_over_lp"] = p.sim.mean / p.ex.objective;
  ratios["baseline_over_lp"] = b.sim.mean / p.ex.objective;
  r["ratios"] = ratios;
  emit(r, o, ctx.out, ctx.elapsed());
  return kExitOk;
}

// Policy and baseline separation on the long-interval family.
struct SeparationCheck {
  CheckResult policy;
  CheckResult baseline;
  double opt = 0.0;
  SimulationSummary policy_sim;
  BaselineSummary baseline_sim;
};

inline SeparationCheck example1_separation(const Instance& inst, const PricePlan& plan, std::int64_t samples,
                                           std::uint64_t seed, int threads, double gamma) {
  SeparationCheck s;
  s.opt = opt_by_branch_and_bound(inst);
  s.policy_sim = simulate(plan, inst.valuations, samples, seed, threads);
  s.baseline_sim = simulate_baseline(inst, gamma, samples, seed, threads);
  // Ratios judged at the favourable end of the 3-sigma interval.
  s.policy = check_ge("policy_ratio", (s.policy_sim.mean + s.policy_sim.radius) / s.opt, 0.95);
  s.baseline = check_ge("baseline_ratio", 0.05, (s.baseline_sim.sim.mean - s.baseline_sim.sim.radius) / s.opt);
  return s;
}

inline int cmd_verify(const Options& o, Context& ctx) {
  Report r;
  r["command"] = "verify";
  bool all_pass = true;
  int passed = 0;
  int total = 0;
  Report items = Report::array();
  VerifyOptions vo;
  vo.seed = o.seed;
  vo.threads = o.threads;
  vo.method = decompose_method(o.decompose);
  if (!o.file.empty()) {
    const Instance inst = load_instance(o);
    vo.samples = o.samples;
    const auto v = verify_all(inst, vo);
    items.push_back(verification_block(v));
    ++total;
    passed += v.pass() ? 1 : 0;
    r["suite"] = "file";
  } else if (o.suite == "fuzz") {
    vo.samples = o.samples > 0 ? o.samples : 20'000;
    for (const auto& inst : fuzz_corpus(o.seed, o.count > 0 ? o.count : 100)) {
      const auto v = verify_all(inst, vo);
      items.push_back(verification_block(v));
      ++total;
      passed += v.pass() ? 1 : 0;
    }
    r["suite"] = "fuzz";
  } else if (o.suite == "example1") {
    vo.samples = o.samples > 0 ? o.samples : 100'000;
    for (const auto& [T, C, eps] : {std::tuple{4, 1.0, 0.5}, std::tuple{5, 2.5, 0.01}, std::tuple{100, 2.5, 1e-4}}) {
      const Instance inst = gen_example1(T, C, eps);
      auto v = verify_all(inst, vo);
      if (T == 100) {
        const auto plan = PricePlan::build(inst);
        const auto sep = example1_separation(inst, plan, vo.samples, o.seed, o.threads, o.gamma);
        v.checks.push_back(sep.policy);
        v.checks.push_back(sep.baseline);
      }
      items.push_back(verification_block(v));
      ++total;
      passed += v.pass() ? 1 : 0;
    }
    r["suite"] = "example1";
  } else if (o.suite == "xos") {
    const std::int64_t samples = o.samples > 0 ? o.samples : 10'000;
    for (const auto& x : xos_corpus(o.seed, o.count > 0 ? o.count : 50)) {
      const auto v = verify_xos(x, samples, o.seed, o.threads);
      items.push_back(xos_verification_block(v));
      ++total;
      passed += v.pass() ? 1 : 0;
    }
    for (const auto& inst : two_point_corpus(o.seed)) {
      const auto c = singleton_consistency(inst);
      Report j;
      j["metadata"] = c.label;
      j["realizations"] = c.realizations;
      j["mismatches"] = c.mismatches;
      j["opt_xos"] = c.opt_xos;
      j["opt_brute"] = c.opt_brute;
      j["pass"] = c.pass();
      items.push_back(j);
      ++total;
      passed += c.pass() ? 1 : 0;
    }
    r["suite"] = "xos";
  } else {
    throw InputError("unknown suite " + o.suite + " (expected fuzz, example1 or xos)");
  }
  all_pass = passed == total;
  r["seed"] = o.seed;
  r["passed"] = passed;
  r["total"] = total;
  r["results"] = items;
  if (o.json) {
    ctx.out << render_json(r);
  } else {
    for (const auto& it : items) {
      double worst = std::numeric_limits<double>::infinity();
      std::string worst_name = "-";
      if (it.contains("checks")) {
        for (const auto& c : it["checks"]) {
          if (c.contains("margin") && c["margin"].get<double>() < worst) {
            worst = c["margin"].get<double>();
            worst_name = c["check"].get<std::string>();
          }
        }
      }
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%-4s %-58.58s min margin %-26s %.6g\n",
                    it["pass"].get<bool>() ? "ok" : "FAIL", it["metadata"].get<std::string>().c_str(),
                    worst_name.c_str(), worst);
      ctx.out << buf;
    }
    ctx.out << passed << "/" << total << " passed\n";
  }
  return all_pass ? kExitOk : kExitVerifyFailed;
}

inline int cmd_xos_simulate(const Options& o, Context& ctx) {
  const XOSInstance x = parse_xos_instance(read_file(o.file));
  const XOSPlan plan(x, prophet_stats(x));
  const auto s = xos_simulate(plan, o.samples, o.seed, o.threads);
  Report r;
  r["command"] = "xos-simulate";
  Report inst;
  inst["digest"] = content_digest(serialize_xos(x));
  inst["T"] = x.T;
  inst["items"] = x.items;
  inst["matroid"] = std::string(to_string(x.matroid.kind));
  inst["metadata"] = x.metadata;
  r["instance"] = inst;
  r["prophet"] = "independent-product optimum";
  r["opt"] = s.opt;
  r["restricted_prophet"] = s.restricted_prophet;
  r["d1"] = s.d1;
  r["d2"] = s.d2;
  r["policy"] = simulation_block(s.sim);
  Report ratios;
  ratios["guarantee"] = 1.0 / ((s.d1 + 1.0) * (s.d2 + 1.0));
  ratios["policy_over_opt"] = s.sim.mean / s.opt;
  ratios["restricted_over_opt"] = s.restricted_prophet / s.opt;
  r["ratios"] = ratios;
  emit(r, o, ctx.out, ctx.elapsed());
  return kExitOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Threshold policies for online selection under a matroid and a conflict graph"};
  app.require_subcommand(1);
  Options o;
  auto add_sim = [&](CLI::App* c) {
    c->add_option("--samples", o.samples, "Monte Carlo runs")->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "Random seed");
    c->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    c->add_flag("--json", o.json, "Emit the report as JSON");
    c->add_option("--decompose", o.decompose, "Decomposition: auto, peel or lp")
        ->check(CLI::IsMember({"auto", "peel", "lp"}));
  };

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_flag("--example1", o.example1, "Long-interval example");
  gen->add_flag("--interval", o.interval, "Random interval-scheduling instance");
  gen->add_flag("--random", o.random, "Random instance with Erdos-Renyi conflicts");
  gen->add_flag("--xos", o.xos, "Random XOS instance");
  gen->add_option("--T", o.T, "Number of agents");
  gen->add_option("--C", o.C, "Example constant C");
  gen->add_option("--eps", o.eps, "Example probability");
  gen->add_option("--J", o.J, "Number of resources");
  gen->add_option("--d", o.d, "Max resources per agent");
  gen->add_option("--K", o.K, "Support size");
  gen->add_option("--kind", o.kind, "Matroid kind")
      ->check(CLI::IsMember({"free", "uniform", "partition", "laminar", "explicit"}));
  gen->add_option("--edge-prob", o.edge_prob, "Edge probability");
  gen->add_option("--resources", o.resources, "Interval resources (XOS)");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Solve the relaxation and build prices");
  solve->add_option("file", o.file, "Instance file")->required();
  solve->add_flag("--emit-mixture", o.emit_mixture, "Include the decomposition atoms");
  solve->add_flag("--json", o.json, "Emit the report as JSON");
  solve->add_flag("--allow-negative", o.allow_negative, "Accept negative support values");
  solve->add_option("--decompose", o.decompose, "Decomposition: auto, peel or lp")
      ->check(CLI::IsMember({"auto", "peel", "lp"}));

  auto* sim = app.add_subcommand("simulate", "Simulate the online policy");
  sim->add_option("file", o.file, "Instance file")->required();
  sim->add_flag("--allow-negative", o.allow_negative, "Accept negative support values");
  add_sim(sim);

  auto* verify = app.add_subcommand("verify", "Check every guarantee on a suite or a file");
  verify->add_option("file", o.file, "Instance file (overrides --suite)");
  verify->add_option("--suite", o.suite, "fuzz, example1 or xos");
  verify->add_option("--count", o.count, "Instances in the suite")->check(CLI::PositiveNumber);
  verify->add_option("--gamma", o.gamma, "Baseline gamma (example1 suite)");
  verify->add_flag("--allow-negative", o.allow_negative, "Accept negative support values");
  add_sim(verify);

  auto* compare = app.add_subcommand("compare-baseline", "Policy against the residual-threshold baseline");
  compare->add_option("file", o.file, "Instance file")->required();
  compare->add_option("--gamma", o.gamma, "Baseline threshold scale");
  compare->add_flag("--exact-only", o.exact_only, "Fail instead of sampling the baseline residual");
  compare->add_flag("--allow-negative", o.allow_negative, "Accept negative support values");
  add_sim(compare);

  auto* xsim = app.add_subcommand("xos-simulate", "Simulate the XOS allocation policy");
  xsim->add_option("file", o.file, "XOS instance file")->required();
  xsim->add_option("--samples", o.samples, "Monte Carlo runs")->check(CLI::PositiveNumber);
  xsim->add_option("--seed", o.seed, "Random seed");
  xsim->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  xsim->add_flag("--json", o.json, "Emit the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInputError;
  }
  // verify picks per-suite sample defaults unless --samples was given.
  if (verify->parsed() && verify->count("--samples") == 0 && o.file.empty()) o.samples = 0;

  Context ctx{out, err};
  try {
    if (gen->parsed()) return cmd_gen(o, ctx);
    if (solve->parsed()) return cmd_solve(o, ctx);
    if (sim->parsed()) return cmd_simulate(o, ctx);
    if (verify->parsed()) return cmd_verify(o, ctx);
    if (compare->parsed()) return cmd_compare(o, ctx);
    if (xsim->parsed()) return cmd_xos_simulate(o, ctx);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const GuardError& e) {
    err << "size guard: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  return kExitInputError;
}

}  // namespace prophet::cli
