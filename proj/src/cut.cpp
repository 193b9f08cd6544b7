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

#include "pbsolve/cut.hpp"

#include <algorithm>
#include <map>

namespace pbsolve {

std::string_view cut_kind_name(CutKind kind) {
  switch (kind) {
    case CutKind::kFlower1:
      return "flower1";
    case CutKind::kFlower2:
      return "flower2";
    case CutKind::kRlt:
      return "rlt";
    case CutKind::kConflict:
      return "conflict";
    case CutKind::kModel:
      return "model";
  }
  return "model";
}

void Cut::canonicalize() {
  std::map<Var, Int> merged;
  for (const LinearTerm& t : terms) merged[t.var] += t.coef;
  terms.clear();
  for (const auto& [v, c] : merged)
    if (c != 0) terms.push_back({v, c});
}

double Cut::activity(std::span<const double> point) const {
  double a = 0.0;
  for (const LinearTerm& t : terms) a += static_cast<double>(t.coef) * point[t.var];
  return a;
}

bool Cut::satisfied_by(std::span<const int> values) const {
  Int128 a = 0;
  for (const LinearTerm& t : terms) a += Int128{t.coef} * values[t.var];
  return a >= rhs;
}

CutFingerprint fingerprint(const Cut& cut) {
  CutFingerprint fp;
  fp.rhs = cut.rhs;
  for (const LinearTerm& t : cut.terms) fp.terms.push_back({t.var, t.coef});
  std::sort(fp.terms.begin(), fp.terms.end());
  return fp;
}

Cut cut_from_row(const NormConstraint& row, CutKind kind) {
  auto [terms, rhs] = to_linear(row);
  Cut cut{std::move(terms), rhs, kind};
  cut.canonicalize();
  return cut;
}

}  // namespace pbsolve
