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

#ifndef PBSOLVE_CUT_HPP_
#define PBSOLVE_CUT_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "pbsolve/model.hpp"

namespace pbsolve {

enum class CutKind { kFlower1, kFlower2, kRlt, kConflict, kModel };

std::string_view cut_kind_name(CutKind kind);

/// sum(coef * x) >= rhs over engine variables, integer data only.
struct Cut {
  std::vector<LinearTerm> terms;
  Int rhs = 0;
  CutKind kind = CutKind::kModel;

  /// Merges repeated variables, drops zeros and sorts by variable.
  void canonicalize();
  double activity(std::span<const double> point) const;
  double violation(std::span<const double> point) const { return static_cast<double>(rhs) - activity(point); }
  bool satisfied_by(std::span<const int> values) const;
  bool empty() const { return terms.empty(); }
};

/// Order-independent identity of a canonical cut (terms and rhs).
struct CutFingerprint {
  std::vector<std::pair<Var, Int>> terms;
  Int rhs = 0;
  friend auto operator<=>(const CutFingerprint&, const CutFingerprint&) = default;
};

CutFingerprint fingerprint(const Cut& cut);

Cut cut_from_row(const NormConstraint& row, CutKind kind);

}  // namespace pbsolve

#endif  // PBSOLVE_CUT_HPP_
