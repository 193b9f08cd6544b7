// Copyright 2026 The pbsolve Authors
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

#include "pbsolve/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace pbsolve {

int LpModel::add_column(double lo, double hi, double cost) {
  lo_.push_back(lo);
  hi_.push_back(hi);
  cost_.push_back(cost);
  return num_cols() - 1;
}

void LpModel::set_bounds(int col, double lo, double hi) {
  lo_[col] = lo;
  hi_[col] = hi;
}

bool LpModel::add_row(Cut row, RowKey key) {
  row.canonicalize();
  if (row.empty()) {
    if (row.rhs > 0) trivially_infeasible_ = true;
    return false;
  }
  if (!fingerprints_.insert(fingerprint(row)).second) return false;
  rows_.push_back({std::move(row.terms), row.rhs, key});
  return true;
}

int add_rows(LpModel& model, std::span<const Cut> cuts, RowKey& next_key) {
  int added = 0;
  for (const Cut& cut : cuts) {
    if (model.add_row(cut, next_key)) {
      ++next_key;
      ++added;
    }
  }
  return added;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;

// Row i reads a_i x - s_i = b_i with surplus s_i in [0, inf). The tableau
// holds B^{-1} [A | -I] and B^{-1} b.
class Simplex {
 public:
  explicit Simplex(const LpModel& model)
      : model_(model), m_(model.num_rows()), n_(model.num_cols()), cols_(n_ + m_) {
    lo_.resize(cols_);
    hi_.resize(cols_);
    cost_.assign(cols_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = model.lo(j);
      hi_[j] = model.hi(j);
      cost_[j] = model.cost(j);
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] = 0.0;
      hi_[n_ + i] = kInf;
    }
    x_.assign(cols_, 0.0);
    for (int j = 0; j < cols_; ++j) x_[j] = lo_[j];
    basic_row_.assign(cols_, -1);
    head_.resize(m_);
  }

  LpSolution run(int iter_limit) {
    LpSolution sol;
    crash(model_.warm_start);
    int refactors = 0;
    bool bland = false;
    int degenerate = 0;
    const int bland_after = 3 * (m_ + cols_);
    for (;;) {
      if (iterations_ >= iter_limit) {
        sol.status = LpStatus::kIterationLimit;
        break;
      }
      if (iterations_ > 0 && iterations_ % 50 == 0) recompute_basics();
      StepResult step = iterate(bland);
      if (step == StepResult::kDegenerate && !bland && ++degenerate > bland_after) bland = true;
      if (step == StepResult::kInfeasible) {
        sol.status = LpStatus::kInfeasible;
        break;
      }
      if (step == StepResult::kStalled) {
        sol.status = LpStatus::kIterationLimit;
        break;
      }
      if (step == StepResult::kOptimal) {
        if (primal_feasible()) {
          sol.status = LpStatus::kOptimal;
          break;
        }
        if (++refactors > 3) {
          sol.status = LpStatus::kIterationLimit;
          break;
        }
        refactor();
      }
    }
    sol.iterations = iterations_;
    sol.x.assign(x_.begin(), x_.begin() + n_);
    for (int j = 0; j < n_; ++j) sol.x[j] = std::clamp(sol.x[j], lo_[j], hi_[j]);
    for (int j = 0; j < n_; ++j) sol.objective += cost_[j] * sol.x[j];
    for (int r = 0; r < m_; ++r) sol.basis.basic.push_back(key_of(head_[r]));
    for (int j = 0; j < cols_; ++j)
      if (basic_row_[j] < 0 && at_upper(j)) sol.basis.at_upper.push_back(key_of(j));
    return sol;
  }

 private:
  enum class StepResult { kProgress, kDegenerate, kOptimal, kInfeasible, kStalled };

  double& t(int r, int c) { return tab_[static_cast<size_t>(r) * cols_ + c]; }
  double t(int r, int c) const { return tab_[static_cast<size_t>(r) * cols_ + c]; }

  bool at_upper(int j) const { return std::isfinite(hi_[j]) && x_[j] == hi_[j] && hi_[j] != lo_[j]; }

  std::uint64_t key_of(int col) const {
    return col < n_ ? static_cast<std::uint64_t>(col) : (LpBasis::kSlackBit | model_.rows()[col - n_].key);
  }

  void load_slack_basis() {
    tab_.assign(static_cast<size_t>(m_) * cols_, 0.0);
    rb_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const LpRow& row = model_.rows()[i];
      for (const LinearTerm& term : row.terms) t(i, term.var) = -static_cast<double>(term.coef);
      t(i, n_ + i) = 1.0;
      rb_[i] = -static_cast<double>(row.rhs);
      head_[i] = n_ + i;
    }
    std::fill(basic_row_.begin(), basic_row_.end(), -1);
    for (int i = 0; i < m_; ++i) basic_row_[n_ + i] = i;
  }

  void pivot(int r, int q) {
    const double piv = t(r, q);
    double* prow = &tab_[static_cast<size_t>(r) * cols_];
    for (int c = 0; c < cols_; ++c) prow[c] /= piv;
    rb_[r] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t(i, q);
      if (f == 0.0) continue;
      double* irow = &tab_[static_cast<size_t>(i) * cols_];
      for (int c = 0; c < cols_; ++c) irow[c] -= f * prow[c];
      irow[q] = 0.0;
      rb_[i] -= f * rb_[r];
    }
    basic_row_[head_[r]] = -1;
    head_[r] = q;
    basic_row_[q] = r;
  }

  // Makes the hinted columns basic where the tableau allows it.
  void crash(const LpBasis& hint) {
    load_slack_basis();
    std::unordered_map<std::uint64_t, int> col_of;
    for (int j = 0; j < cols_; ++j) col_of[key_of(j)] = j;
    std::unordered_set<int> want;
    for (std::uint64_t k : hint.basic)
      if (auto it = col_of.find(k); it != col_of.end()) want.insert(it->second);
    for (std::uint64_t k : hint.at_upper) {
      if (auto it = col_of.find(k); it != col_of.end()) {
        int j = it->second;
        if (std::isfinite(hi_[j]) && !want.count(j)) x_[j] = hi_[j];
      }
    }
    std::vector<int> wanted(want.begin(), want.end());
    std::sort(wanted.begin(), wanted.end());
    for (int j : wanted) {
      if (basic_row_[j] >= 0) continue;
      int best = -1;
      double best_abs = 1e-7;
      for (int r = 0; r < m_; ++r) {
        int h = head_[r];
        if (h < n_ || want.count(h)) continue;
        double a = std::abs(t(r, j));
        if (a > best_abs) {
          best_abs = a;
          best = r;
        }
      }
      if (best >= 0) pivot(best, j);
    }
    for (int j = 0; j < cols_; ++j)
      if (basic_row_[j] < 0 && !at_upper(j)) x_[j] = lo_[j];
    recompute_basics();
  }

  void refactor() {
    std::vector<int> heads = head_;
    load_slack_basis();
    for (int q : heads) {
      if (basic_row_[q] >= 0) continue;
      int best = -1;
      double best_abs = 1e-9;
      for (int r = 0; r < m_; ++r) {
        if (std::find(heads.begin(), heads.end(), head_[r]) != heads.end()) continue;
        double a = std::abs(t(r, q));
        if (a > best_abs) {
          best_abs = a;
          best = r;
        }
      }
      if (best >= 0) pivot(best, q);
    }
    for (int j = 0; j < cols_; ++j)
      if (basic_row_[j] < 0) x_[j] = at_upper(j) ? hi_[j] : lo_[j];
    recompute_basics();
  }

  void recompute_basics() {
    for (int r = 0; r < m_; ++r) {
      double v = rb_[r];
      const double* row = &tab_[static_cast<size_t>(r) * cols_];
      for (int j = 0; j < cols_; ++j)
        if (basic_row_[j] < 0 && x_[j] != 0.0) v -= row[j] * x_[j];
      x_[head_[r]] = v;
    }
  }

  bool primal_feasible() const {
    for (int j = 0; j < n_; ++j)
      if (x_[j] < lo_[j] - kLpFeasTol || x_[j] > hi_[j] + kLpFeasTol) return false;
    for (const LpRow& row : model_.rows()) {
      double act = 0.0;
      for (const LinearTerm& term : row.terms)
        act += static_cast<double>(term.coef) * std::clamp(x_[term.var], lo_[term.var], hi_[term.var]);
      if (act < static_cast<double>(row.rhs) - kLpFeasTol) return false;
    }
    return true;
  }

  StepResult iterate(bool bland) {
    ++iterations_;
    // Phase 1 costs when some basic variable is out of bounds.
    std::vector<double> cb(m_, 0.0);
    bool phase1 = false;
    for (int r = 0; r < m_; ++r) {
      int h = head_[r];
      if (x_[h] < lo_[h] - kLpFeasTol) {
        cb[r] = -1.0;
        phase1 = true;
      } else if (x_[h] > hi_[h] + kLpFeasTol) {
        cb[r] = 1.0;
        phase1 = true;
      }
    }
    if (!phase1)
      for (int r = 0; r < m_; ++r) cb[r] = cost_[head_[r]];

    int enter = -1;
    double enter_d = 0.0;
    for (int j = 0; j < cols_; ++j) {
      if (basic_row_[j] >= 0 || lo_[j] == hi_[j]) continue;
      double d = phase1 ? 0.0 : cost_[j];
      for (int r = 0; r < m_; ++r)
        if (cb[r] != 0.0) d -= cb[r] * t(r, j);
      bool up = at_upper(j);
      bool improving = up ? d > kDualTol : d < -kDualTol;
      if (!improving) continue;
      if (bland) {
        enter = j;
        enter_d = d;
        break;
      }
      if (enter < 0 || std::abs(d) > std::abs(enter_d)) {
        enter = j;
        enter_d = d;
      }
    }
    if (enter < 0) return phase1 ? StepResult::kInfeasible : StepResult::kOptimal;

    const double dir = at_upper(enter) ? -1.0 : 1.0;
    double step = hi_[enter] - lo_[enter];
    int leave = -1;
    bool leave_upper = false;
    for (int r = 0; r < m_; ++r) {
      const double a = t(r, enter);
      if (std::abs(a) <= kLpPivotTol) continue;
      const double rate = -dir * a;  // change of the basic variable per unit step
      const int h = head_[r];
      const double v = x_[h];
      double limit = kInf;
      bool to_upper = false;
      if (rate < 0) {
        if (v > hi_[h] + kLpFeasTol) {
          limit = (v - hi_[h]) / -rate;
          to_upper = true;
        } else if (v >= lo_[h] - kLpFeasTol) {
          limit = (v - lo_[h]) / -rate;
        }
      } else {
        if (v < lo_[h] - kLpFeasTol) {
          limit = (lo_[h] - v) / rate;
        } else if (v <= hi_[h] + kLpFeasTol && std::isfinite(hi_[h])) {
          limit = (hi_[h] - v) / rate;
          to_upper = true;
        }
      }
      if (!std::isfinite(limit)) continue;
      limit = std::max(limit, 0.0);
      bool better = limit < step - 1e-12;
      if (!better && leave >= 0 && std::abs(limit - step) <= 1e-12)
        better = bland ? head_[r] < head_[leave] : std::abs(a) > std::abs(t(leave, enter));
      if (better) {
        step = limit;
        leave = r;
        leave_upper = to_upper;
      }
    }
    if (!std::isfinite(step)) return StepResult::kStalled;

    x_[enter] += dir * step;
    if (leave < 0) {
      // Bound flip.
      x_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
      recompute_basics();
      return step < 1e-12 ? StepResult::kDegenerate : StepResult::kProgress;
    }
    const int out = head_[leave];
    pivot(leave, enter);
    x_[out] = leave_upper ? hi_[out] : lo_[out];
    recompute_basics();
    return step < 1e-12 ? StepResult::kDegenerate : StepResult::kProgress;
  }

  const LpModel& model_;
  int m_, n_, cols_;
  std::vector<double> tab_, rb_;
  std::vector<double> lo_, hi_, cost_, x_;
  std::vector<int> head_, basic_row_;
  int iterations_ = 0;
};

}  // namespace

LpSolution lp_solve(const LpModel& model, int iter_limit) {
  if (model.trivially_infeasible()) {
    LpSolution sol;
    sol.status = LpStatus::kInfeasible;
    return sol;
  }
  for (int j = 0; j < model.num_cols(); ++j) {
    if (model.lo(j) > model.hi(j)) {
      LpSolution sol;
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
  }
  return Simplex(model).run(iter_limit);
}

}  // namespace pbsolve
