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

// The solver driver. Optimization instances run LP-based branch and bound
// (best bound with plunging) on top of the propagation engine; decision
// instances and the sat-like mode run a conflict-driven search with LP at
// the root only.

#ifndef PBSOLVE_SEARCH_HPP_
#define PBSOLVE_SEARCH_HPP_

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pbsolve/cut.hpp"
#include "pbsolve/model.hpp"

namespace pbsolve {

enum class Mode { kDefault, kAggressiveHeur, kSatLike };

std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

enum class Provenance { kFjump, kLpRounding, kNodeIntegral };

std::string_view provenance_name(Provenance p);

struct Incumbent {
  std::vector<int> values;  // original variables x1..xn
  Int128 objective = 0;
  Provenance provenance = Provenance::kNodeIntegral;
};

/// Best solution shared by portfolio workers.
class IncumbentMailbox {
 public:
  /// Keeps `inc` if it is better than the stored one.
  bool offer(const Incumbent& inc);
  std::optional<Incumbent> best() const;
  std::optional<Int128> best_objective() const;

 private:
  mutable std::mutex mu_;
  std::optional<Incumbent> best_;
};

struct SolverConfig {
  double time_limit = 0.0;       // seconds, 0 = none
  std::uint64_t node_limit = 0;  // 0 = none
  std::uint64_t seed = 0;
  Mode mode = Mode::kDefault;
  bool flower = true;
  bool rlt = true;
  bool symmetry = true;
  // Conflict analysis; when off, infeasible nodes are only pruned.
  bool conflict_pb = true;
  bool fjump = true;
  bool restarts = true;
  int portfolio = 1;
  double mcap = 1e6;
  double ftol = 1e-6;
  const std::atomic<bool>* stop = nullptr;
  IncumbentMailbox* mailbox = nullptr;
  // Called for every learned constraint (engine variables) with its taint.
  // Single worker only.
  std::function<void(const NormConstraint&, bool)> on_learned;
};

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t learned = 0;
  std::uint64_t clause_fallbacks = 0;
  std::uint64_t lp_iterations = 0;
  std::array<std::uint64_t, 5> cuts{};  // indexed by CutKind
  int restarts = 0;
  std::uint64_t fj_flips = 0;
  int generators = 0;
  std::uint64_t lex_fixings = 0;
  std::uint64_t orbital_fixings = 0;
  int indicator_rows = 0;
  int indicator_skipped = 0;
  int rejected_candidates = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kUnknown;
  std::optional<Incumbent> incumbent;
  std::optional<Int128> dual_bound;
  SolveStats stats;
};

SolveResult solve(const EngineProblem& problem, const SolverConfig& config);

/// Runs config.portfolio independent workers (default, aggressive-heur and
/// sat-like settings in turn, seeds seed + 1000 i) sharing incumbents. The
/// first definite answer wins.
SolveResult solve_portfolio(const EngineProblem& problem, const SolverConfig& config);

/// Rounds `candidate` (original variables first) to 0/1 and checks every
/// original constraint exactly; AND terms are evaluated from the rounded
/// values. Values outside [-eps, 1 + eps] are rejected.
std::optional<Incumbent> check_solution(const Instance& inst, std::span<const double> candidate,
                                        Provenance provenance, double eps = 1e-6);

/// LP row for "y = 1 implies row": row + M (1 - y) >= degree with M the
/// degree minus the activity of literals fixed true in `values` (-1 free).
/// Returns the plain row when y is fixed to 1 and nothing when y is fixed
/// to 0 or the row is already satisfied. Sets `skipped` when M > mcap.
std::optional<NormConstraint> indicator_lp_row(const NormConstraint& row, Var y, std::span<const int> values,
                                               double mcap, bool& skipped);

/// Restart rule: at most 3 restarts, triggered when 20% of the variables
/// were fixed since the last one or when all indicators just became fixed.
bool restart_due(int restarts_done, int n_vars, int fixed_now, int fixed_at_last, bool indicators_all_fixed,
                 bool indicators_were_all_fixed);

}  // namespace pbsolve

#endif  // PBSOLVE_SEARCH_HPP_
