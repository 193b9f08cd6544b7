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


// Structured instance families: planted-solution, symmetric, pigeonhole.

#ifndef PBSOLVE_TESTS_FAMILIES_HPP_
#define PBSOLVE_TESTS_FAMILIES_HPP_

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/random_instance.hpp"

namespace pbsolve::testing {

/// Linear rows all satisfied by a hidden random point.
inline Instance planted_instance(std::mt19937_64& rng, int n, int m, bool with_objective = true) {
  std::vector<int> x(n);
  for (int& v : x) v = static_cast<int>(uniform(rng, 0, 1));
  Instance inst;
  inst.n_vars = n;
  for (int i = 0; i < m; ++i) {
    PbConstraint c;
    std::set<int> used;
    Int act = 0, low = 0;
    int len = static_cast<int>(uniform(rng, 2, std::min(n, 6)));
    while (static_cast<int>(used.size()) < len) used.insert(static_cast<int>(uniform(rng, 1, n)));
    for (int v : used) {
      Int coef = uniform(rng, -9, 9);
      if (coef == 0) coef = 1;
      c.terms.push_back({coef, {v}});
      act += coef * x[v - 1];
      low += std::min<Int>(coef, 0);
    }
    c.relation = Relation::kGe;
    c.rhs = uniform(rng, low, act);
    inst.constraints.push_back(std::move(c));
  }
  if (with_objective) {
    inst.objective = std::vector<Term>{};
    for (int v = 1; v <= n; ++v) inst.objective->push_back({uniform(rng, -5, 5), {v}});
  }
  inst.intsize = compute_intsize(inst);
  return inst;
}

/// Rows closed under a random permutation made of 1-, 2- and 3-cycles, and
/// an objective constant on each cycle, so syntactic symmetry is likely.
inline Instance symmetric_instance(std::mt19937_64& rng, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Instance inst;
  inst.n_vars = n;
  int blocks = static_cast<int>(uniform(rng, 1, 3));
  std::vector<std::vector<int>> cyc;
  for (int i = 0; i < n;) {
    int len = std::min(n - i, static_cast<int>(uniform(rng, 1, 3)));
    cyc.push_back(std::vector<int>(perm.begin() + i, perm.begin() + i + len));
    i += len;
  }
  auto rot = [&](int v, int k) {
    for (const auto& c : cyc) {
      auto it = std::find(c.begin(), c.end(), v);
      if (it != c.end()) return c[(it - c.begin() + k) % c.size()];
    }
    return v;
  };
  inst.objective = std::vector<Term>{};
  for (const auto& c : cyc) {
    Int w = uniform(rng, -3, 3);
    for (int v : c) inst.objective->push_back({w, {v + 1}});
  }
  for (int b = 0; b < blocks; ++b) {
    std::vector<std::pair<Int, int>> base;
    std::set<int> used;
    int len = static_cast<int>(uniform(rng, 1, std::min(n, 4)));
    while (static_cast<int>(used.size()) < len) used.insert(static_cast<int>(uniform(rng, 0, n - 1)));
    Int pos = 0;
    for (int v : used) {
      Int c = uniform(rng, -3, 4);
      if (c == 0) c = 1;
      base.push_back({c, v});
      pos += std::max<Int>(c, 0);
    }
    Int rhs = uniform(rng, 0, std::max<Int>(pos - 1, 0));
    // All images of the row under the rotation (orbit of size <= 6).
    std::set<std::vector<std::pair<int, Int>>> images;
    for (int k = 0; k < 6; ++k) {
      std::vector<std::pair<int, Int>> row;
      for (auto [c, v] : base) row.push_back({rot(v, k), c});
      std::sort(row.begin(), row.end());
      images.insert(row);
    }
    for (const auto& row : images) {
      PbConstraint pc;
      for (auto [v, c] : row) pc.terms.push_back({c, {v + 1}});
      pc.relation = Relation::kGe;
      pc.rhs = rhs;
      inst.constraints.push_back(pc);
    }
  }
  inst.intsize = compute_intsize(inst);
  return inst;
}

/// Random rows over 3 to 5 literals (either sign) with coefficients in
/// [1, max_coef] and degree between a fifth and a third of the coefficient
/// sum. The
/// all-1/2 point satisfies every row, so the LP relaxation stays feasible
/// and infeasibility has to be found by search.
inline Instance random_literal_rows(std::mt19937_64& rng, int n, int m, Int max_coef) {
  Instance inst;
  inst.n_vars = n;
  for (int i = 0; i < m; ++i) {
    PbConstraint c;
    std::set<int> used;
    int len = static_cast<int>(uniform(rng, 3, std::min(n, 5)));
    while (static_cast<int>(used.size()) < len) used.insert(static_cast<int>(uniform(rng, 1, n)));
    Int sum = 0;
    std::vector<std::pair<Int, int>> lits;
    for (int v : used) {
      Int a = uniform(rng, 1, max_coef);
      sum += a;
      lits.push_back({a, uniform(rng, 0, 1) ? v : -v});
    }
    Int degree = std::max<Int>(1, uniform(rng, sum / 5, sum / 3));
    // a * ~x = a - a x moves a to the right-hand side.
    for (auto [a, l] : lits) {
      if (l > 0) {
        c.terms.push_back({a, {l}});
      } else {
        c.terms.push_back({-a, {-l}});
        degree -= a;
      }
    }
    c.rhs = degree;
    inst.constraints.push_back(std::move(c));
  }
  inst.intsize = compute_intsize(inst);
  return inst;
}

/// Pigeons into holes: every pigeon in some hole, at most `cap` per hole.
/// Variable x_{p*holes+h+1} puts pigeon p into hole h.
inline std::string pigeonhole_text(int pigeons, int holes, int cap = 1) {
  std::string t;
  auto var = [&](int p, int h) { return "x" + std::to_string(p * holes + h + 1); };
  for (int p = 0; p < pigeons; ++p) {
    for (int h = 0; h < holes; ++h) t += "+1 " + var(p, h) + " ";
    t += ">= 1 ;\n";
  }
  for (int h = 0; h < holes; ++h) {
    for (int p = 0; p < pigeons; ++p) t += "-1 " + var(p, h) + " ";
    t += ">= -" + std::to_string(cap) + " ;\n";
  }
  return t;
}

}  // namespace pbsolve::testing

#endif  // PBSOLVE_TESTS_FAMILIES_HPP_
