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

// Reading and writing of OPB / WBO files, and the competition output
// protocol (`c`, `o`, `s`, `v` lines).

#ifndef PBSOLVE_OPB_HPP_
#define PBSOLVE_OPB_HPP_

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pbsolve/types.hpp"

namespace pbsolve {

/// Largest intsize accepted by the parser. All per-constraint sums then fit
/// comfortably in 128-bit accumulators.
inline constexpr int kMaxIntsize = 62;

/// coef * prod(monomial). Monomial holds sorted, distinct 1-based indices.
struct Term {
  Int coef = 0;
  std::vector<int> monomial;

  friend bool operator==(const Term&, const Term&) = default;
};

enum class Relation { kGe, kEq };

struct PbConstraint {
  std::vector<Term> terms;
  Relation relation = Relation::kGe;
  Int rhs = 0;
  std::optional<Int> weight;  // absent => hard

  bool is_soft() const { return weight.has_value(); }
  friend bool operator==(const PbConstraint&, const PbConstraint&) = default;
};

struct Instance {
  int n_vars = 0;
  std::optional<std::vector<Term>> objective;
  // Constant produced when negated literals are folded into the objective.
  Int objective_constant = 0;
  std::vector<PbConstraint> constraints;
  bool is_wbo = false;
  std::optional<Int> top_cost;
  int intsize = 0;

  bool has_objective() const { return objective.has_value() || is_wbo; }
  bool is_linear() const;
  friend bool operator==(const Instance&, const Instance&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Raised for instances whose intsize exceeds kMaxIntsize.
class UnsupportedIntsize : public std::runtime_error {
 public:
  explicit UnsupportedIntsize(int intsize)
      : std::runtime_error("unsupported intsize " + std::to_string(intsize) + " (limit " +
                           std::to_string(kMaxIntsize) + " bits)"),
        intsize_(intsize) {}
  int intsize() const { return intsize_; }

 private:
  int intsize_;
};

Instance parse_opb(std::string_view text);
Instance parse_opb_file(const std::string& path);

/// Bit length of the largest per-constraint (or objective) sum of absolute
/// values of all integers in it. Saturates instead of overflowing.
int compute_intsize(const Instance& inst);

/// Canonical writer; parse_opb(write_opb(inst)) == inst.
std::string write_opb(const Instance& inst);

enum class SolveStatus { kSatisfiable, kOptimum, kUnsatisfiable, kUnknown };

std::string_view status_name(SolveStatus status);

void emit_objective(Int128 value, std::ostream& sink);
void emit_comment(std::string_view text, std::ostream& sink);

/// Writes the `o` line (when an objective value exists), the `s` line and
/// the `v` line (when a model exists). `model[i]` is the value of x_{i+1}.
void emit_result(SolveStatus status, std::optional<Int128> best_obj,
                 const std::optional<std::vector<int>>& model, std::ostream& sink);

}  // namespace pbsolve

#endif  // PBSOLVE_OPB_HPP_
