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

// Acceptance run: prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "prophet/verify.hpp"

namespace {

using namespace prophet;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kCorpusSeed = 7;
constexpr std::uint64_t kSimulationSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

int failures = 0;

// Runs one criterion under its time budget (seconds; <= 0 for none).
void criterion(int id, const char* name, double budget, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double took = seconds_since(t0);
  bool pass = o.pass;
  std::string detail = o.detail;
  if (budget > 0 && took > budget) {
    pass = false;
    detail += fmt("; over time budget %.0fs", budget);
  }
  if (!pass) ++failures;
  std::printf("%s criterion %2d %-32s %s [%.2fs]\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(), took);
  std::fflush(stdout);
}

}  // namespace

int main() {
  const auto corpus = fuzz_corpus(kCorpusSeed, 100);

  criterion(1, "example1-separation", 30.0, [] {
    const int T = 100;
    const double C = 2.5, eps = 1e-4;
    const std::int64_t samples = 100'000;
    const Instance inst = gen_example1(T, C, eps);
    const double opt = C + T - 1 + eps;
    const auto exact = opt_within_guard(inst);
    const auto plan = PricePlan::build(inst);
    const auto policy = simulate(plan, inst.valuations, samples, kSimulationSeed);
    const auto base = simulate_baseline(inst, kDefaultGamma, samples, kSimulationSeed);
    const double hi = (policy.mean + policy.radius) / opt;
    const double lo = (base.sim.mean - base.sim.radius) / opt;
    const bool opt_ok = exact && std::abs(exact->value - opt) <= 1e-9;
    return Outcome{opt_ok && hi >= 0.95 && lo <= 0.05,
                   fmt("OPT=%.6f policy/OPT=%.4f (+3sd %.4f) baseline/OPT=%.4f (-3sd %.4f)", opt,
                       policy.mean / opt, hi, base.sim.mean / opt, lo)};
  });

  criterion(2, "restricted-prophet-vs-lp", 10.0, [&] {
    int ok = 0;
    double worst = kInf;
    for (const auto& inst : corpus) {
      const MatroidOracle m(inst.matroid);
      const ConflictGraph g = build_graph(inst.conflicts, inst.T);
      const auto ex = solve_exante(inst, m, g);
      const PricePlan plan(m, g, ex.x_star, ex.y_star, decompose(m, ex.x_star));
      const double rhs = ex.objective / (g.d2() + 1.0);
      const double lhs = plan.closed_form();
      worst = std::min(worst, lhs - rhs);
      ok += lhs >= rhs - kBoundSlack ? 1 : 0;
    }
    return Outcome{ok == 100, fmt("%d/100, min margin %.3g", ok, worst)};
  });

  // Criteria 3, 4, 5 and 8 share one verification pass over the corpus.
  std::vector<InstanceVerification> runs;
  const auto t_verify = Clock::now();
  std::string verify_error;
  try {
    VerifyOptions vo;
    vo.samples = 20'000;
    vo.seed = kSimulationSeed;
    for (const auto& inst : corpus) runs.push_back(verify_all(inst, vo));
  } catch (const std::exception& e) {
    verify_error = e.what();
  }
  const double verify_seconds = seconds_since(t_verify);

  auto tally = [&](const char* check, int expected) {
    int ok = 0, counted = 0;
    double worst = kInf;
    for (const auto& r : runs) {
      const CheckResult* c = r.find(check);
      if (c == nullptr || c->skipped) continue;
      ++counted;
      ok += c->pass ? 1 : 0;
      worst = std::min(worst, c->margin());
    }
    if (!verify_error.empty()) return Outcome{false, "verification failed: " + verify_error};
    return Outcome{ok == counted && counted == expected,
                   fmt("%d/%d, min margin %.3g (shared pass %.1fs)", ok, counted, worst, verify_seconds)};
  };

  criterion(3, "policy-vs-restricted-prophet", 0, [&] {
    auto o = tally("policy_vs_restricted", 100);
    if (verify_seconds > 120.0) {
      o.pass = false;
      o.detail += "; over time budget 120s";
    }
    return o;
  });
  criterion(4, "policy-vs-lp", 0, [&] { return tally("policy_vs_lp", 100); });
  criterion(5, "lp-upper-bounds-opt", 0, [&] {
    int within_guard = 0;
    for (const auto& inst : corpus) {
      within_guard += realization_count(inst.valuations) <= kRealizationLimit ? 1 : 0;
    }
    return tally("lp_upper_bound", within_guard);
  });

  criterion(6, "interval-d2-bound", 10.0, [] {
    int ok = 0;
    int worst_gap = 1 << 30;
    const auto cases = interval_corpus(kCorpusSeed, 200);
    for (const auto& inst : cases) {
      const int d = inst.conflicts.max_requests(inst.T);
      const int d2 = build_graph(inst.conflicts, inst.T).d2();
      const bool shape = inst.T <= 15 && d >= 1 && d <= 3;
      worst_gap = std::min(worst_gap, d - d2);
      ok += shape && d2 <= d ? 1 : 0;
    }
    return Outcome{ok == 200 && cases.size() == 200u, fmt("%d/200, min d - d2 = %d", ok, worst_gap)};
  });

  criterion(7, "mixture-decomposition", 10.0, [] {
    int ok = 0;
    std::string first_bad;
    for (const auto& c : mixture_corpus(kCorpusSeed, 500)) {
      const MatroidOracle m(c.matroid);
      const auto mix = decompose(m, c.x);
      const auto check = verify_mixture(m, mix, c.x, kMixtureTolerance);
      const bool atoms_ok = static_cast<int>(mix.atoms.size()) <= m.ground_size() + 1;
      if (check.ok && atoms_ok) {
        ++ok;
      } else if (first_bad.empty()) {
        first_bad = c.label + ": " + check.diagnostic;
      }
    }
    return Outcome{ok == 500, fmt("%d/500%s%s", ok, first_bad.empty() ? "" : ", first failure ", first_bad.c_str())};
  });

  criterion(8, "closed-form-identity", 0, [&] { return tally("closed_form_identity", 100); });

  criterion(9, "xos-policy-bound", 300.0, [] {
    int ok = 0, ok_exact = 0;
    double worst = kInf;
    const auto xs = xos_corpus(kCorpusSeed, 50);
    for (const auto& x : xs) {
      const auto v = verify_xos(x, 10'000, kSimulationSeed);
      bool pass = true;
      for (const auto& c : v.checks) {
        if (c.name == "xos_policy_bound") {
          pass = pass && c.pass;
          worst = std::min(worst, c.margin());
        }
        if (c.name == "restricted_prophet_bound") ok_exact += c.pass ? 1 : 0;
      }
      ok += pass ? 1 : 0;
    }
    return Outcome{ok == 50 && ok_exact == 50,
                   fmt("policy %d/50 (min margin %.3g), restricted prophet %d/50", ok, worst, ok_exact)};
  });

  criterion(10, "singleton-xos-consistency", 0, [] {
    int ok = 0;
    std::size_t realizations = 0, mismatches = 0;
    double worst = 0.0;
    for (const auto& inst : two_point_corpus(kCorpusSeed, 20)) {
      const auto r = singleton_consistency(inst);
      ok += r.pass() ? 1 : 0;
      realizations += r.realizations;
      mismatches += r.mismatches;
      worst = std::max(worst, std::abs(r.opt_xos - r.opt_brute));
    }
    return Outcome{ok == 20, fmt("%d/20, %zu realizations, %zu mismatches, max |OPT diff| %.2g", ok, realizations,
                                 mismatches, worst)};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
