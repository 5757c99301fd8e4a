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
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace prophet::lp {

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Row {
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// maximize objective . x  subject to rows, x >= 0.
struct Problem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct Solution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

struct Options {
  double pivot_tolerance = 1e-10;
  double cost_tolerance = 1e-10;
  int max_iterations = 200000;
};

// Dense two-phase tableau simplex. Dantzig pricing, switching to Bland's
// rule after a degenerate pivot until the objective moves again.
class Simplex {
 public:
  Simplex(const Problem& p, Options opts) : opts_(opts) { build(p); }

  Solution solve() {
    Solution out;
    if (num_artificial_ > 0) {
      set_phase1_objective();
      const Status s = iterate(/*allow_artificial=*/true);
      if (s == Status::kIterationLimit) return finish(out, s);
      // cost_ holds minus the phase-one objective, i.e. the artificial mass left.
      if (cost_[width_ - 1] > 1e-9 * std::max(1.0, rhs_scale_)) return finish(out, Status::kInfeasible);
      drive_out_artificials();
    }
    set_phase2_objective();
    return finish(out, iterate(/*allow_artificial=*/false));
  }

 private:
  double& at(std::size_t r, std::size_t c) { return tab_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return tab_[r * width_ + c]; }

  void build(const Problem& p) {
    n_ = p.num_vars;
    m_ = p.rows.size();
    objective_ = p.objective;
    objective_.resize(static_cast<std::size_t>(n_), 0.0);
    std::size_t slacks = 0;
    num_artificial_ = 0;
    for (const auto& r : p.rows) {
      const bool flip = r.rhs < 0.0;
      Sense s = r.sense;
      if (flip && s == Sense::kLessEqual) s = Sense::kGreaterEqual;
      else if (flip && s == Sense::kGreaterEqual) s = Sense::kLessEqual;
      if (s != Sense::kEqual) ++slacks;
      if (s != Sense::kLessEqual) ++num_artificial_;
    }
    slack_begin_ = static_cast<std::size_t>(n_);
    art_begin_ = slack_begin_ + slacks;
    width_ = art_begin_ + num_artificial_ + 1;
    tab_.assign(m_ * width_, 0.0);
    basis_.assign(m_, 0);
    std::size_t next_slack = slack_begin_;
    std::size_t next_art = art_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& r = p.rows[i];
      const double sign = r.rhs < 0.0 ? -1.0 : 1.0;
      Sense s = r.sense;
      if (sign < 0 && s == Sense::kLessEqual) s = Sense::kGreaterEqual;
      else if (sign < 0 && s == Sense::kGreaterEqual) s = Sense::kLessEqual;
      for (const auto& [j, a] : r.coeffs) at(i, static_cast<std::size_t>(j)) += sign * a;
      at(i, width_ - 1) = sign * r.rhs;
      rhs_scale_ = std::max(rhs_scale_, std::abs(r.rhs));
      if (s == Sense::kLessEqual) {
        at(i, next_slack) = 1.0;
        basis_[i] = next_slack++;
      } else if (s == Sense::kGreaterEqual) {
        at(i, next_slack++) = -1.0;
        at(i, next_art) = 1.0;
        basis_[i] = next_art++;
      } else {
        at(i, next_art) = 1.0;
        basis_[i] = next_art++;
      }
    }
  }

  // Reduced-cost row for the given column costs, expressed in the current
  // basis; the last entry holds minus the objective value.
  void price(const std::vector<double>& costs) {
    cost_.assign(width_, 0.0);
    for (std::size_t j = 0; j + 1 < width_; ++j) cost_[j] = costs[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = costs[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) cost_[j] -= cb * at(i, j);
    }
  }

  void set_phase1_objective() {
    std::vector<double> costs(width_ - 1, 0.0);
    for (std::size_t j = art_begin_; j + 1 < width_; ++j) costs[j] = -1.0;
    price(costs);
  }

  void set_phase2_objective() {
    std::vector<double> costs(width_ - 1, 0.0);
    for (int j = 0; j < n_; ++j) costs[static_cast<std::size_t>(j)] = objective_[j];
    price(costs);
  }

  void pivot(std::size_t row, std::size_t col) {
    const double inv = 1.0 / at(row, col);
    for (std::size_t j = 0; j < width_; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    const double f = cost_[col];
    if (f != 0.0) {
      for (std::size_t j = 0; j < width_; ++j) cost_[j] -= f * at(row, j);
      cost_[col] = 0.0;
    }
    basis_[row] = col;
  }

  Status iterate(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? width_ - 1 : art_begin_;
    bool bland = false;
    while (true) {
      if (iterations_ >= opts_.max_iterations) return Status::kIterationLimit;
      std::size_t enter = limit;
      double best = opts_.cost_tolerance;
      for (std::size_t j = 0; j < limit; ++j) {
        if (cost_[j] > best) {
          enter = j;
          if (bland) break;
          best = cost_[j];
        }
      }
      if (enter == limit) return Status::kOptimal;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a > opts_.pivot_tolerance) ratio = std::min(ratio, at(i, width_ - 1) / a);
      }
      // Ties in the ratio test go to the smallest basic index.
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= opts_.pivot_tolerance) continue;
        if (at(i, width_ - 1) / a <= ratio + 1e-12 &&
            (leave == m_ || basis_[i] < basis_[leave])) {
          leave = i;
        }
      }
      if (leave == m_) return Status::kUnbounded;
      bland = ratio <= 1e-12;
      pivot(leave, enter);
      ++iterations_;
    }
  }

  // After phase one, artificial variables still basic sit at zero; pivot
  // them out on any usable column, or leave the (redundant) row alone.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < art_begin_) continue;
      for (std::size_t j = 0; j < art_begin_; ++j) {
        if (std::abs(at(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Solution finish(Solution& out, Status s) {
    out.status = s;
    out.iterations = iterations_;
    out.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < static_cast<std::size_t>(n_)) {
        out.x[basis_[i]] = std::max(0.0, at(i, width_ - 1));
      }
    }
    out.objective = 0.0;
    for (int j = 0; j < n_; ++j) out.objective += objective_[j] * out.x[j];
    return out;
  }

  Options opts_;
  int n_ = 0;
  std::size_t m_ = 0;
  std::size_t width_ = 0;
  std::size_t slack_begin_ = 0;
  std::size_t art_begin_ = 0;
  std::size_t num_artificial_ = 0;
  double rhs_scale_ = 1.0;
  std::vector<double> objective_;
  std::vector<double> tab_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
  int iterations_ = 0;
};

inline Solution solve(const Problem& p, Options opts = {}) {
  Simplex s(p, opts);
  return s.solve();
}

}  // namespace prophet::lp
