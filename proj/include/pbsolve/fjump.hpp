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

// Feasibility Jump on 0/1 variables with integer weights and exact
// activities. Rows are the hard rows, the indicator rows folded with their
// indicator, the objective cap and, once a solution is known, the objective
// bound best - 1.

#ifndef PBSOLVE_FJUMP_HPP_
#define PBSOLVE_FJUMP_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pbsolve/model.hpp"

namespace pbsolve {

class FjState {
 public:
  FjState(int n_vars, std::vector<NormConstraint> rows, std::vector<int> start);

  int n_vars() const { return static_cast<int>(value_.size()); }
  int n_rows() const { return static_cast<int>(rows_.size()); }
  int value(Var v) const { return value_[v]; }
  const std::vector<int>& values() const { return value_; }
  Int128 activity(int r) const { return act_[r]; }
  Int weight(int r) const { return weight_[r]; }
  Int128 violation(int r) const;
  /// Cached change of sum(weight * violation) when flipping v.
  Int128 score(Var v) const { return score_[v]; }
  /// Same quantity recomputed from the rows.
  Int128 score_from_scratch(Var v) const;
  Int128 recompute_activity(int r) const;
  const std::vector<int>& violated_rows() const { return violated_; }
  const std::vector<Var>& improving_vars() const { return good_; }
  const NormConstraint& row(int r) const { return rows_[r]; }

  void flip(Var v);
  void bump_weight(int r);
  /// Appends a row (weight 1) and returns its index.
  int add_row(NormConstraint row);
  /// Replaces row r by a row over the same literals in the same order.
  void replace_row(int r, NormConstraint row);

 private:
  Int128 contribution(int r, Int128 act, Int coef, Lit lit) const;
  void refresh_row(int r, int sign);
  void set_violated(int r, bool on);
  void set_good(Var v);

  std::vector<NormConstraint> rows_;
  std::vector<std::vector<std::pair<int, int>>> occ_;  // var -> (row, index in row)
  std::vector<int> value_;
  std::vector<Int128> act_;
  std::vector<Int> weight_;
  std::vector<Int128> score_;
  std::vector<int> violated_;
  std::vector<int> violated_pos_;
  std::vector<Var> good_;
  std::vector<int> good_pos_;
};

struct FjConfig {
  std::uint64_t seed = 0;
  std::uint64_t max_flips = 50'000'000;
  // Give up after this many flips without a new best violation count.
  std::uint64_t stall_limit = 50'000;
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
  const std::atomic<bool>* stop = nullptr;
  // Objective bound of an already known solution.
  std::optional<Int128> incumbent;
  std::vector<int> start;
  bool record_trace = false;
};

struct FjResult {
  std::optional<std::vector<int>> solution;  // over all engine variables
  Int128 objective = 0;
  std::uint64_t flips = 0;
  std::vector<Var> trace;
};

/// Rows of the problem as FJ sees them (hard, folded indicators, cap).
std::vector<NormConstraint> fj_rows(const EngineProblem& problem);

/// Normalized row for objective <= bound, or nullopt if every point
/// satisfies it. Sets `impossible` when no point does.
std::optional<NormConstraint> objective_bound_row(const EngineProblem& problem, Int128 bound, bool& impossible);

FjResult fj_run(const EngineProblem& problem, const FjConfig& config);

}  // namespace pbsolve

#endif  // PBSOLVE_FJUMP_HPP_
