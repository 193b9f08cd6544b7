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

// Permutation symmetries of the engine problem. Detection runs color
// refinement plus individualization on a graph with one node per variable
// and one per distinct row (hard rows and indicator rows folded with their
// indicator). Handling is lex-leader propagation in variable index order
// and orbital fixing of root 0-fixings.

#ifndef PBSOLVE_SYMMETRY_HPP_
#define PBSOLVE_SYMMETRY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pbsolve/model.hpp"

namespace pbsolve {

struct DetectionGraph {
  int n_vars = 0;
  // Variables: kind and objective coefficient. Rows: degree and length.
  std::vector<int> var_color;
  std::vector<int> row_color;
  // rows[r]: (variable, edge label) sorted by variable. Labels encode
  // coefficient and sign of the literal.
  std::vector<std::vector<std::pair<Var, int>>> rows;
};

DetectionGraph build_detection_graph(const EngineProblem& problem);

/// A permutation of the engine variables.
class Generator {
 public:
  explicit Generator(std::vector<Var> perm);
  Var operator()(Var v) const { return perm_[v]; }
  const std::vector<Var>& perm() const { return perm_; }
  /// Moved variables, increasing.
  const std::vector<Var>& support() const { return support_; }
  std::vector<std::vector<Var>> cycles() const;
  friend bool operator==(const Generator& a, const Generator& b) { return a.perm_ == b.perm_; }

 private:
  std::vector<Var> perm_;
  std::vector<Var> support_;
};

struct SymmetryStats {
  std::uint64_t nodes = 0;
  bool limit_hit = false;
};

/// Automorphism generators. Stops after `node_limit` search nodes and
/// returns what was found so far. Only validated generators are returned.
std::vector<Generator> detect_symmetries(const EngineProblem& problem, std::uint64_t node_limit = 50000,
                                         SymmetryStats* stats = nullptr);

/// Maps the rows (hard and folded indicator rows) onto themselves as a
/// multiset and keeps kinds and objective coefficients.
bool validate_generator(const EngineProblem& problem, const Generator& gen);

struct LexFixing {
  Lit lit;
  // Clause containing `lit` whose other literals are false.
  NormConstraint reason;
};

struct LexOutcome {
  std::vector<LexFixing> fixings;
  // All-false clause when x >=lex gen(x) is already violated.
  std::optional<NormConstraint> conflict;
};

/// Propagates x >=lex gen(x), where gen(x)_i = x_{gen(i)}, given values in
/// {-1, 0, 1} (-1 unassigned). Fixings are in the order they must be made.
LexOutcome lex_leader_propagate(const Generator& gen, std::span<const int> values);

/// Orbit id (smallest member) of every variable under the generators.
std::vector<Var> orbits(int n_vars, const std::vector<Generator>& gens);

/// Root orbital fixing: variables in an orbit containing a usable 0-fixing
/// that are not yet assigned. `usable[v]` marks fixings derived without
/// symmetry reasoning.
std::vector<Var> orbital_zero_fixings(const std::vector<Var>& orbit, std::span<const int> values,
                                      std::span<const char> usable);

}  // namespace pbsolve

#endif  // PBSOLVE_SYMMETRY_HPP_
