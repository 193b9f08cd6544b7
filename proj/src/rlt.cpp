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

#include "pbsolve/rlt.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pbsolve {

namespace {

constexpr double kMinViolation = 1e-6;

std::pair<Var, Var> key(Var j, Var k) { return j < k ? std::pair{j, k} : std::pair{k, j}; }

// Accumulates s * (product of x_j and x_k) into `cut` through a bound that
// keeps ">=" valid: upper bound for s > 0, lower bound for s < 0.
void add_product(Cut& cut, Int s, Var j, Var k, const ProductTable& table, std::span<const double> pt) {
  if (j == k) {
    cut.terms.push_back({k, s});
    return;
  }
  const ProductEntry* entry = table.find(j, k);
  if (entry && entry->exact) {
    cut.terms.push_back({*entry->exact, s});
    return;
  }
  if (s > 0) {
    // x_j x_k <= min(x_j, x_k)
    cut.terms.push_back({pt[j] <= pt[k] ? j : k, s});
    return;
  }
  // x_j x_k >= max(0, x_j + x_k - 1), or >= z_e of a larger product.
  double best = 0.0;
  int choice = 0;  // 0: constant 0, 1: McCormick, 2: relaxed
  Var relaxed = -1;
  if (pt[j] + pt[k] - 1.0 > best) {
    best = pt[j] + pt[k] - 1.0;
    choice = 1;
  }
  if (entry)
    for (Var z : entry->relaxed)
      if (pt[z] > best) {
        best = pt[z];
        choice = 2;
        relaxed = z;
      }
  if (choice == 1) {
    cut.terms.push_back({j, s});
    cut.terms.push_back({k, s});
    cut.rhs += s;  // the constant -s moves to the right-hand side
  } else if (choice == 2) {
    cut.terms.push_back({relaxed, s});
  }
}

}  // namespace

const ProductEntry* ProductTable::find(Var j, Var k) const {
  auto it = entries_.find(key(j, k));
  return it == entries_.end() ? nullptr : &it->second;
}

ProductTable build_product_table(const EngineProblem& problem) {
  ProductTable t;
  std::set<Var> factors;
  for (const AndDef& def : problem.and_defs) {
    factors.insert(def.operands.begin(), def.operands.end());
    if (def.operands.size() == 2) {
      t.entries_[key(def.operands[0], def.operands[1])].exact = def.z;
      continue;
    }
    for (size_t a = 0; a < def.operands.size(); ++a)
      for (size_t b = a + 1; b < def.operands.size(); ++b)
        t.entries_[key(def.operands[a], def.operands[b])].relaxed.push_back(def.z);
  }
  t.factors_.assign(factors.begin(), factors.end());
  return t;
}

std::vector<Cut> separate_rlt(const Cut& row, Var k, const ProductTable& table, std::span<const double> point) {
  std::vector<Cut> out;
  constexpr Int kLimit = Int{1} << 60;
  if (row.rhs > kLimit || row.rhs < -kLimit) return out;
  for (const LinearTerm& t : row.terms)
    if (t.coef > kLimit || t.coef < -kLimit) return out;
  // x_k * (sum a_j x_j - b) >= 0
  Cut times;
  times.kind = CutKind::kRlt;
  for (const LinearTerm& t : row.terms) add_product(times, t.coef, t.var, k, table, point);
  times.terms.push_back({k, -row.rhs});
  // (1 - x_k) * (sum a_j x_j - b) >= 0
  Cut comp;
  comp.kind = CutKind::kRlt;
  comp.rhs = row.rhs;
  for (const LinearTerm& t : row.terms) {
    comp.terms.push_back({t.var, t.coef});
    add_product(comp, -t.coef, t.var, k, table, point);
  }
  comp.terms.push_back({k, row.rhs});
  for (Cut* c : {&times, &comp}) {
    c->canonicalize();
    if (c->empty()) continue;
    if (c->violation(point) > kMinViolation) out.push_back(std::move(*c));
  }
  return out;
}

std::vector<Cut> separate_rlt_round(const EngineProblem& problem, const ProductTable& table,
                                    std::span<const double> point, const RltLimits& limits) {
  if (table.empty()) return {};
  std::vector<Var> factors;
  for (Var k : table.factor_vars())
    if (point[k] > kMinViolation && point[k] < 1.0 - kMinViolation) factors.push_back(k);
  std::stable_sort(factors.begin(), factors.end(),
                   [&](Var a, Var b) { return std::abs(point[a] - 0.5) < std::abs(point[b] - 0.5); });
  if (static_cast<int>(factors.size()) > limits.max_factors) factors.resize(limits.max_factors);
  if (factors.empty()) return {};
  std::vector<char> is_factor(problem.n_total, 0);
  for (Var k : table.factor_vars()) is_factor[k] = 1;

  // Rows touching a factor variable, tightest first.
  std::vector<std::pair<double, Cut>> rows;
  for (size_t i = problem.and_link_rows; i < problem.hard.size(); ++i) {
    const NormConstraint& r = problem.hard[i];
    if (r.lits.size() < 2) continue;
    bool touches = std::any_of(r.lits.begin(), r.lits.end(), [&](const WeightedLit& wl) {
      return is_factor[wl.lit.var()] && problem.kinds[wl.lit.var()] == VarKind::kOriginal;
    });
    if (!touches) continue;
    Cut c = cut_from_row(r, CutKind::kModel);
    rows.push_back({c.activity(point) - static_cast<double>(c.rhs), std::move(c)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (static_cast<int>(rows.size()) > limits.max_rows) rows.resize(limits.max_rows);

  std::vector<Cut> cuts;
  std::set<CutFingerprint> seen;
  for (const auto& [slack, row] : rows)
    for (Var k : factors)
      for (Cut& c : separate_rlt(row, k, table, point))
        if (seen.insert(fingerprint(c)).second) cuts.push_back(std::move(c));
  std::stable_sort(cuts.begin(), cuts.end(),
                   [&](const Cut& a, const Cut& b) { return a.violation(point) > b.violation(point); });
  if (static_cast<int>(cuts.size()) > limits.max_cuts) cuts.resize(limits.max_cuts);
  return cuts;
}

}  // namespace pbsolve
