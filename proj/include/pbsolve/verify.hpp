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

// Stand-alone solution checker. It works on the parsed instance only and
// does not use the engine, so it can judge the solver's output.

#ifndef PBSOLVE_VERIFY_HPP_
#define PBSOLVE_VERIFY_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pbsolve/opb.hpp"

namespace pbsolve {

/// Reads "x1 -x2 ..." (an optional leading "v" is skipped). Every variable
/// of the instance must appear exactly once. Throws std::invalid_argument.
std::vector<int> parse_v_line(std::string_view text, int n_vars);

struct VerifyReport {
  bool valid = false;
  // One line per violated constraint (and for the top-cost check).
  std::vector<std::string> diagnostics;
  // Objective (or soft violation cost) of a valid solution.
  std::optional<Int128> objective;
};

VerifyReport verify_solution(const Instance& inst, const std::vector<int>& x);

}  // namespace pbsolve

#endif  // PBSOLVE_VERIFY_HPP_
