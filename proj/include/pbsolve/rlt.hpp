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

// RLT cuts: a linear row sum a_j x_j >= b is multiplied by x_k or 1 - x_k
// and every product x_j x_k is replaced by x_k (j = k), by its AND variable,
// or by a McCormick bound chosen so the inequality stays valid.

#ifndef PBSOLVE_RLT_HPP_
#define PBSOLVE_RLT_HPP_

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pbsolve/cut.hpp"
#include "pbsolve/model.hpp"

namespace pbsolve {

struct ProductEntry {
  // z = x_j x_k.
  std::optional<Var> exact;
  // AND variables of larger products containing both: z <= x_j x_k.
  std::vector<Var> relaxed;
};

class ProductTable {
 public:
  const ProductEntry* find(Var j, Var k) const;
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  /// Variables that occur in some AND definition, sorted.
  const std::vector<Var>& factor_vars() const { return factors_; }

  friend ProductTable build_product_table(const EngineProblem& problem);

 private:
  std::map<std::pair<Var, Var>, ProductEntry> entries_;
  std::vector<Var> factors_;
};

ProductTable build_product_table(const EngineProblem& problem);

/// Both products of `row` (linear, x-space) with factor x_k, keeping those
/// violated by more than 1e-6 at `point`.
std::vector<Cut> separate_rlt(const Cut& row, Var k, const ProductTable& table, std::span<const double> point);

struct RltLimits {
  int max_rows = 2;
  int max_factors = 20;
  int max_cuts = 100;
};

/// One separation round over the hard rows of `problem`: the tightest rows
/// at `point` times the most fractional factor variables.
std::vector<Cut> separate_rlt_round(const EngineProblem& problem, const ProductTable& table,
                                    std::span<const double> point, const RltLimits& limits = {});

}  // namespace pbsolve

#endif  // PBSOLVE_RLT_HPP_
