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

// Dense bounded-variable primal simplex. Sized for node relaxations of
// small and medium instances; every row comes from integer data.

#ifndef PBSOLVE_LP_HPP_
#define PBSOLVE_LP_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "pbsolve/cut.hpp"

namespace pbsolve {

inline constexpr double kLpPivotTol = 1e-9;
inline constexpr double kLpFeasTol = 1e-9;

using RowKey = std::uint64_t;

/// Columns basic (or nonbasic at their upper bound) at the end of a solve.
/// Structural column j is encoded as j; the surplus of row `key` as
/// kSlackBit | key.
struct LpBasis {
  static constexpr std::uint64_t kSlackBit = std::uint64_t{1} << 63;
  std::vector<std::uint64_t> basic;
  std::vector<std::uint64_t> at_upper;
  bool empty() const { return basic.empty() && at_upper.empty(); }
};

struct LpRow {
  std::vector<LinearTerm> terms;  // sorted by column
  Int rhs = 0;                    // sum(coef * x) >= rhs
  RowKey key = 0;
};

class LpModel {
 public:
  int add_column(double lo, double hi, double cost);
  void set_bounds(int col, double lo, double hi);
  /// Returns false when an identical row is already present.
  bool add_row(Cut row, RowKey key);

  int num_cols() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<LpRow>& rows() const { return rows_; }
  double lo(int j) const { return lo_[j]; }
  double hi(int j) const { return hi_[j]; }
  double cost(int j) const { return cost_[j]; }

  /// Set by an empty row with positive right-hand side.
  bool trivially_infeasible() const { return trivially_infeasible_; }

  /// Warm start used by the next lp_solve.
  LpBasis warm_start;

 private:
  std::vector<double> lo_, hi_, cost_;
  std::vector<LpRow> rows_;
  std::set<CutFingerprint> fingerprints_;
  bool trivially_infeasible_ = false;
};

enum class LpStatus { kOptimal, kInfeasible, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  LpBasis basis;
  int iterations = 0;
};

LpSolution lp_solve(const LpModel& model, int iter_limit);

/// Appends cuts as rows (key = next_key++). Duplicates are skipped; returns
/// the number of rows added.
int add_rows(LpModel& model, std::span<const Cut> cuts, RowKey& next_key);

}  // namespace pbsolve

#endif  // PBSOLVE_LP_HPP_
