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

// Cut-based conflict analysis: the conflicting row is combined with the
// reasons of the trail literals it contains, each reason being weakened and
// divided so that the resolved literal gets coefficient one.

#ifndef PBSOLVE_CONFLICT_HPP_
#define PBSOLVE_CONFLICT_HPP_

#include <optional>
#include <vector>

#include "pbsolve/propagation.hpp"

namespace pbsolve {

struct AnalysisResult {
  // The conflict holds at level 0: the constraint set is infeasible.
  bool unsat = false;
  NormConstraint learned;
  int backjump_level = 0;
  // Some reason came from symmetry handling.
  bool tainted = false;
  // Coefficients grew past 2^62 and first-UIP clause learning was used.
  bool clause_fallback = false;
  std::vector<ConstrRef> reasons_used;
  std::vector<Var> vars_seen;
};

/// `conflict` must have negative slack under the current trail.
AnalysisResult analyze(const PropEngine& engine, const NormConstraint& conflict, bool conflict_tainted = false);

/// First-UIP clause learning on reasons weakened to clauses.
AnalysisResult analyze_clause(const PropEngine& engine, const NormConstraint& conflict,
                              bool conflict_tainted = false);

/// Divides every coefficient and the degree by d > 0, rounding up.
NormConstraint divide_ceil(const NormConstraint& row, Int d);

/// conflict + c * reason with c the coefficient of ~pivot in `conflict`,
/// saturated. `pivot` must have coefficient one in `reason`.
NormConstraint resolve(const NormConstraint& conflict, const NormConstraint& reason, Lit pivot);

/// Caps every coefficient at the degree.
void saturate(NormConstraint& row);

/// Smallest decision level below the highest level of a false literal at
/// which `row` is not falsified and propagates some literal, if any.
std::optional<int> assertion_level(const NormConstraint& row, const PropEngine& engine);

}  // namespace pbsolve

#endif  // PBSOLVE_CONFLICT_HPP_
