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

// Trail plus a store of normalized PB constraints with watched propagation.
//
// Each constraint watches a set of its literals. Whenever the watch set does
// not carry degree + max_coef worth of non-false coefficients it contains
// every non-false literal, so the watched slack is the real slack and
// propagation is exact.

#ifndef PBSOLVE_PROPAGATION_HPP_
#define PBSOLVE_PROPAGATION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "pbsolve/model.hpp"

namespace pbsolve {

using ConstrRef = int;

/// Reason of a trail literal: a stored constraint (>= 0), a decision
/// (kDecisionReason) or an external reason clause (<= kExternalBase).
using Reason = int;
inline constexpr Reason kDecisionReason = -1;
inline constexpr Reason kExternalBase = -2;

struct StoredConstraint {
  NormConstraint row;  // literals sorted by decreasing coefficient
  Int max_coef = 0;
  std::vector<std::uint8_t> watched;
  bool learned = false;
  // Derived with help of symmetry reasoning.
  bool tainted = false;
  bool deleted = false;
  double activity = 0.0;
};

class PropEngine {
 public:
  explicit PropEngine(int n_vars);

  int n_vars() const { return static_cast<int>(value_.size()); }

  // -1 unassigned, else 0/1.
  int value(Var v) const { return value_[v]; }
  // -1 unassigned, 1 true, 0 false.
  int lit_value(Lit l) const {
    int v = value_[l.var()];
    return v < 0 ? -1 : l.eval(v);
  }
  bool is_false(Lit l) const { return lit_value(l) == 0; }
  bool is_true(Lit l) const { return lit_value(l) == 1; }
  int level(Var v) const { return level_[v]; }
  int trail_pos(Var v) const { return pos_[v]; }
  Reason reason(Var v) const { return reason_[v]; }
  int decision_level() const { return static_cast<int>(level_start_.size()); }
  const std::vector<Lit>& trail() const { return trail_; }
  /// Number of trail literals assigned at levels <= `lvl`.
  int level_end(int lvl) const;
  int num_assigned() const { return static_cast<int>(trail_.size()); }

  /// Opens a new level and assigns `l` as its decision.
  void decide(Lit l);
  /// Undoes every level above `lvl`.
  void backjump(int lvl);

  /// Assigns `l` true with an external reason clause (symmetry). The clause
  /// must contain `l` and have all other literals false.
  void enqueue_external(Lit l, NormConstraint reason);

  /// Stores a constraint and picks its watches for the current state. The
  /// next propagate() call checks it against the current assignment.
  ConstrRef add_constraint(NormConstraint row, bool learned, bool tainted = false);
  const StoredConstraint& constraint(ConstrRef c) const { return store_[c]; }
  StoredConstraint& constraint(ConstrRef c) { return store_[c]; }
  int num_constraints() const { return static_cast<int>(store_.size()); }

  /// The normalized row that implied the assignment of `v`.
  const NormConstraint& reason_row(Var v) const;
  bool reason_tainted(Var v) const;

  /// Runs to fixpoint. Returns the conflicting constraint, if any.
  std::optional<ConstrRef> propagate();

  /// Slack of a row under the current assignment: non-false coefficients
  /// minus the degree.
  Int128 slack(const NormConstraint& row) const;

  /// Deletes the less active half of learned constraints that are not
  /// reasons and have more than two literals. Called when the learned count
  /// exceeds `cap`.
  void reduce_learned(int cap);
  int num_learned() const { return n_learned_; }
  void bump_constraint(ConstrRef c);
  void decay_constraint_activity() { constr_inc_ /= 0.999; }

  std::uint64_t propagations() const { return propagations_; }

 private:
  void assign(Lit l, Reason r);
  void init_watches(ConstrRef c);
  void watch(ConstrRef c, int idx);
  // Handles falsification of a watched literal of constraint c. Returns
  // true when the watch on that literal should be kept.
  bool update(ConstrRef c, Lit falsified, bool& conflict);
  bool check(ConstrRef c);

  std::vector<int> value_;
  std::vector<int> level_;
  std::vector<int> pos_;
  std::vector<Reason> reason_;
  std::vector<Lit> trail_;
  std::vector<int> level_start_;
  std::vector<size_t> ext_start_;
  size_t qhead_ = 0;

  std::vector<StoredConstraint> store_;
  // watches_[lit.code()]: constraints watching literal `lit`.
  std::vector<std::vector<ConstrRef>> watches_;
  std::vector<ConstrRef> pending_;
  // (level, constraint) for constraints added above level 0.
  std::vector<std::pair<int, ConstrRef>> late_added_;
  std::vector<NormConstraint> ext_reasons_;
  int n_learned_ = 0;
  double constr_inc_ = 1.0;
  std::uint64_t propagations_ = 0;
};

}  // namespace pbsolve

#endif  // PBSOLVE_PROPAGATION_HPP_
