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

#include "pbsolve/verify.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace pbsolve {

std::vector<int> parse_v_line(std::string_view text, int n_vars) {
  std::vector<int> x(n_vars, -1);
  std::istringstream in{std::string(text)};
  std::string tok;
  bool first = true;
  while (in >> tok) {
    if (first && tok == "v") {
      first = false;
      continue;
    }
    first = false;
    int value = 1;
    std::string_view t = tok;
    if (!t.empty() && (t[0] == '-' || t[0] == '~')) {
      value = 0;
      t.remove_prefix(1);
    }
    if (t.size() < 2 || t[0] != 'x') throw std::invalid_argument("bad literal '" + tok + "'");
    int idx = 0;
    auto [p, ec] = std::from_chars(t.data() + 1, t.data() + t.size(), idx);
    if (ec != std::errc() || p != t.data() + t.size() || idx < 1 || idx > n_vars)
      throw std::invalid_argument("bad variable '" + tok + "'");
    if (x[idx - 1] >= 0) throw std::invalid_argument("variable x" + std::to_string(idx) + " given twice");
    x[idx - 1] = value;
  }
  for (int i = 0; i < n_vars; ++i)
    if (x[i] < 0) throw std::invalid_argument("variable x" + std::to_string(i + 1) + " missing");
  return x;
}

namespace {

Int128 activity(const std::vector<Term>& terms, const std::vector<int>& x) {
  Int128 sum = 0;
  for (const Term& t : terms) {
    int prod = 1;
    for (int v : t.monomial) prod &= x[v - 1];
    if (prod) sum += t.coef;
  }
  return sum;
}

}  // namespace

VerifyReport verify_solution(const Instance& inst, const std::vector<int>& x) {
  VerifyReport rep;
  if (static_cast<int>(x.size()) != inst.n_vars) {
    rep.diagnostics.push_back("assignment has " + std::to_string(x.size()) + " values, instance has " +
                              std::to_string(inst.n_vars) + " variables");
    return rep;
  }
  Int128 cost = 0;
  bool hard_ok = true;
  for (size_t i = 0; i < inst.constraints.size(); ++i) {
    const PbConstraint& c = inst.constraints[i];
    Int128 act = activity(c.terms, x);
    bool ok = c.relation == Relation::kEq ? act == c.rhs : act >= c.rhs;
    if (ok) continue;
    if (c.weight) {
      cost += *c.weight;
      continue;
    }
    hard_ok = false;
    rep.diagnostics.push_back("constraint " + std::to_string(i + 1) + ": activity " + int128_to_string(act) +
                              (c.relation == Relation::kEq ? " != " : " < ") + int128_to_string(c.rhs));
  }
  if (inst.is_wbo && inst.top_cost && cost >= *inst.top_cost) {
    hard_ok = false;
    rep.diagnostics.push_back("soft violation cost " + int128_to_string(cost) + " >= top " +
                              int128_to_string(*inst.top_cost));
  }
  rep.valid = hard_ok;
  if (hard_ok) {
    if (inst.is_wbo) {
      rep.objective = cost;
    } else if (inst.objective) {
      rep.objective = activity(*inst.objective, x) + inst.objective_constant;
    }
  }
  return rep;
}

}  // namespace pbsolve
