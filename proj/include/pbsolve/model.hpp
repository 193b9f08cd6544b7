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

// Engine form of an instance: monomials are replaced by AND auxiliaries,
// soft constraints by indicator rows, and every hard row is normalized to
// sum(a_j * l_j) >= b with a_j > 0 over literals.

#ifndef PBSOLVE_MODEL_HPP_
#define PBSOLVE_MODEL_HPP_

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pbsolve/opb.hpp"
#include "pbsolve/types.hpp"

namespace pbsolve {

struct WeightedLit {
  Int coef = 0;
  Lit lit;
  friend bool operator==(const WeightedLit&, const WeightedLit&) = default;
};

struct NormConstraint {
  std::vector<WeightedLit> lits;
  Int degree = 0;

  Int128 coef_sum() const;
  // Sum of coefficients below the degree: no 0/1 point satisfies the row.
  bool infeasible() const { return coef_sum() < degree; }
  bool satisfied_by(std::span<const int> values) const;
  friend bool operator==(const NormConstraint&, const NormConstraint&) = default;
};

/// z = AND(operands).
struct AndDef {
  Var z = -1;
  std::vector<Var> operands;  // sorted, size >= 2
};

/// y = 1 implies every row in `rows` holds. Equalities give two rows.
struct IndicatorRow {
  Var y = -1;
  std::vector<NormConstraint> rows;
  Int weight = 1;
};

enum class VarKind { kOriginal, kAnd, kIndicator };

/// A term of a linear row over engine variables.
struct LinearTerm {
  Var var = 0;
  Int coef = 0;
};

struct EngineProblem {
  int n_orig = 0;
  int n_total = 0;
  std::vector<VarKind> kinds;
  std::vector<NormConstraint> hard;
  // hard[0 .. and_link_rows) define the AND variables.
  int and_link_rows = 0;
  std::vector<IndicatorRow> indicators;
  std::vector<AndDef> and_defs;
  // Minimize objective . x + objective_offset.
  std::vector<Int> objective;
  Int objective_offset = 0;
  bool has_objective = false;
  // For WBO top cost: objective value must not exceed this.
  std::optional<Int> objective_cap;
  // A hard row had coefficient sum below its degree.
  bool trivially_infeasible = false;
  std::shared_ptr<const Instance> original;

  /// Objective value of a full 0/1 assignment, exact.
  Int128 objective_value(std::span<const int> values) const;
  /// Hard rows, indicator semantics and objective cap.
  bool feasible(std::span<const int> values) const;
};

/// Normalizes sum(coef * x) (relation) rhs. Terms over the same variable are
/// merged. Rows that are always satisfied are dropped; `=` yields two rows.
std::vector<NormConstraint> normalize(std::span<const LinearTerm> terms, Relation relation, Int rhs);

/// Linear form sum(coef * x) >= rhs of a normalized row.
std::pair<std::vector<LinearTerm>, Int> to_linear(const NormConstraint& row);

/// Indicator row folded into one normalized row: row + degree * ~y >= degree.
NormConstraint indicator_as_row(Var y, const NormConstraint& row);

EngineProblem linearize(const Instance& inst);

/// Fills AND variables from the original ones and sets every indicator to
/// the truth value of its rows. `values` covers all engine variables.
void complete_assignment(const EngineProblem& problem, std::vector<int>& values);

class OracleLimitExceeded : public std::runtime_error {
 public:
  OracleLimitExceeded() : std::runtime_error("oracle variable cap exceeded") {}
};

struct OracleResult {
  SolveStatus status = SolveStatus::kUnknown;
  std::optional<Int128> objective;
  std::optional<std::vector<int>> model;  // over original variables
};

/// Exhaustive enumeration over the original variables of `inst`.
OracleResult oracle_solve(const Instance& inst, int var_cap = 22);

}  // namespace pbsolve

#endif  // PBSOLVE_MODEL_HPP_
