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

// Brute-force references used only by tests. None of this code is shared
// with the solver.

#ifndef PBSOLVE_TESTS_ORACLES_HPP_
#define PBSOLVE_TESTS_ORACLES_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pbsolve/model.hpp"

namespace pbsolve::testing {

/// Calls fn(values) for each of the 2^n assignments.
inline void for_each_assignment(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> x(n, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (int i = 0; i < n; ++i) x[i] = static_cast<int>((mask >> i) & 1);
    fn(x);
  }
}

/// Row semantics straight from the definition, independent of the engine.
inline bool row_holds(const NormConstraint& row, const std::vector<int>& x) {
  Int128 act = 0;
  for (const auto& wl : row.lits) {
    int v = x[wl.lit.var()];
    act += wl.coef * (wl.lit.negated() ? 1 - v : v);
  }
  return act >= row.degree;
}

inline bool engine_feasible(const EngineProblem& p, const std::vector<int>& x) {
  for (const auto& row : p.hard)
    if (!row_holds(row, x)) return false;
  for (const auto& ind : p.indicators)
    if (x[ind.y])
      for (const auto& row : ind.rows)
        if (!row_holds(row, x)) return false;
  if (p.objective_cap) {
    Int128 v = p.objective_offset;
    for (int j = 0; j < p.n_total; ++j) v += Int128{p.objective[j]} * x[j];
    if (v > *p.objective_cap) return false;
  }
  return true;
}

struct EngineOptimum {
  bool feasible = false;
  Int128 value = 0;
};

/// Enumerates every engine variable.
inline EngineOptimum engine_brute_force(const EngineProblem& p) {
  EngineOptimum best;
  for_each_assignment(p.n_total, [&](const std::vector<int>& x) {
    if (!engine_feasible(p, x)) return;
    Int128 v = p.objective_offset;
    for (int j = 0; j < p.n_total; ++j) v += Int128{p.objective[j]} * x[j];
    if (!best.feasible || v < best.value) best = {true, v};
  });
  return best;
}

/// Single equality in the shape of the infeasible Aardal-type instance:
/// 5567264 x1 + 7 * (2^0 x2 + ... + 2^15 x17) = 5842800. Every subset of the
/// small coefficients sums to a multiple of 7 while 5842800 - 5567264 =
/// 275536 is 2 mod 7 and the small coefficients alone stay below 5842800,
/// so no 0/1 point is feasible. The point x1 = 1 with the small part equal
/// to 275534 = 7 * 39362 has activity rhs - 2.
inline std::string equality_knapsack_text() {
  std::string text = "* #variable= 17 #constraint= 1\n+5567264 x1";
  for (int k = 0; k < 16; ++k) text += " +" + std::to_string(7 * (1 << k)) + " x" + std::to_string(k + 2);
  text += " = 5842800 ;\n";
  return text;
}

/// The near-feasible 0/1 point of equality_knapsack_text(), activity rhs-2.
inline std::vector<int> equality_knapsack_near_point() {
  std::vector<int> x(17, 0);
  x[0] = 1;
  for (int k = 0; k < 16; ++k) x[k + 1] = (39362 >> k) & 1;
  return x;
}

}  // namespace pbsolve::testing

#endif  // PBSOLVE_TESTS_ORACLES_HPP_
