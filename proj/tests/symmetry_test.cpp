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

#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "pbsolve/symmetry.hpp"
#include "support/families.hpp"
#include "support/oracles.hpp"
#include "support/random_instance.hpp"

using namespace pbsolve;

namespace {

// Every group element generated by `gens` (closure by BFS).
std::set<std::vector<Var>> group(int n, const std::vector<Generator>& gens) {
  std::vector<Var> id(n);
  for (int i = 0; i < n; ++i) id[i] = i;
  std::set<std::vector<Var>> seen{id};
  std::vector<std::vector<Var>> todo{id};
  while (!todo.empty()) {
    auto p = todo.back();
    todo.pop_back();
    for (const Generator& g : gens) {
      std::vector<Var> q(n);
      for (int i = 0; i < n; ++i) q[i] = g(p[i]);
      if (seen.insert(q).second) todo.push_back(q);
    }
  }
  return seen;
}

// x >=lex gen(x) with gen(x)_i = x_{gen(i)}, checked directly.
bool lex_ok(const Generator& g, const std::vector<int>& x) {
  for (size_t i = 0; i < x.size(); ++i) {
    int a = x[i], b = x[g(static_cast<Var>(i))];
    if (a != b) return a > b;
  }
  return true;
}

testing::EngineOptimum optimum_with(const EngineProblem& p, const std::vector<Generator>& gens) {
  testing::EngineOptimum best;
  testing::for_each_assignment(p.n_total, [&](const std::vector<int>& x) {
    if (!testing::engine_feasible(p, x)) return;
    for (const Generator& g : gens)
      if (!lex_ok(g, x)) return;
    Int128 v = p.objective_offset;
    for (int j = 0; j < p.n_total; ++j) v += Int128{p.objective[j]} * x[j];
    if (!best.feasible || v < best.value) best = {true, v};
  });
  return best;
}

}  // namespace

TEST_CASE("swap of a symmetric clause") {
  EngineProblem p = linearize(parse_opb("+1 x1 +1 x2 >= 1;"));
  auto gens = detect_symmetries(p);
  REQUIRE(gens.size() == 1);
  CHECK(gens[0].perm() == std::vector<Var>{1, 0});
  CHECK(gens[0].cycles() == std::vector<std::vector<Var>>{{0, 1}});
}

TEST_CASE("different coefficients give no generator") {
  CHECK(detect_symmetries(linearize(parse_opb("+1 x1 +2 x2 >= 2;"))).empty());
}

TEST_CASE("pairwise clauses over four variables give the full symmetric group") {
  std::string text;
  for (int a = 1; a <= 4; ++a)
    for (int b = a + 1; b <= 4; ++b) text += "+1 x" + std::to_string(a) + " +1 x" + std::to_string(b) + " >= 1;\n";
  EngineProblem p = linearize(parse_opb(text));
  auto gens = detect_symmetries(p);
  CHECK(gens.size() >= 2);
  for (const Generator& g : gens) CHECK(validate_generator(p, g));
  CHECK(group(4, gens).size() == 24);
}

TEST_CASE("lex rule on a two-cycle") {
  Generator g({1, 0});
  LexOutcome out = lex_leader_propagate(g, std::vector<int>{0, -1});
  REQUIRE(out.fixings.size() == 1);
  CHECK(out.fixings[0].lit == Lit::neg(1));
  CHECK_FALSE(out.conflict);
  // Reason is x1 + ~x2 >= 1.
  CHECK(out.fixings[0].reason.degree == 1);
  CHECK(out.fixings[0].reason.lits.size() == 2);
  CHECK(lex_leader_propagate(g, std::vector<int>{-1, -1}).fixings.empty());
  CHECK(lex_leader_propagate(g, std::vector<int>{0, 1}).conflict.has_value());
  CHECK(lex_leader_propagate(g, std::vector<int>{-1, 1}).fixings[0].lit == Lit::pos(0));
}

TEST_CASE("lex fixings and reasons agree with enumeration") {
  std::mt19937_64 rng(61);
  for (int iter = 0; iter < 500; ++iter) {
    int n = static_cast<int>(testing::uniform(rng, 2, 7));
    std::vector<Var> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Generator g(perm);
    std::vector<int> vals(n);
    for (int& v : vals) v = static_cast<int>(testing::uniform(rng, -1, 1));
    LexOutcome out = lex_leader_propagate(g, vals);
    // Completions of the partial point that satisfy the lex constraint.
    bool any = false;
    std::vector<int> must(n, -2);
    testing::for_each_assignment(n, [&](const std::vector<int>& x) {
      for (int i = 0; i < n; ++i)
        if (vals[i] >= 0 && vals[i] != x[i]) return;
      if (!lex_ok(g, x)) return;
      any = true;
      for (int i = 0; i < n; ++i) must[i] = must[i] == -2 ? x[i] : (must[i] == x[i] ? x[i] : -1);
    });
    std::vector<int> cur = vals;
    for (const LexFixing& f : out.fixings) {
      Var v = f.lit.var();
      if (any) CHECK(must[v] == f.lit.eval(1));
      // reason: other literals false, and the clause holds on lex solutions
      for (const WeightedLit& wl : f.reason.lits)
        if (wl.lit != f.lit) CHECK(cur[wl.lit.var()] >= 0);
      testing::for_each_assignment(n, [&](const std::vector<int>& x) {
        if (lex_ok(g, x)) CHECK(testing::row_holds(f.reason, x));
      });
      cur[v] = f.lit.eval(1);
    }
    if (out.conflict) {
      CHECK_FALSE(any);
      for (const WeightedLit& wl : out.conflict->lits) {
        REQUIRE(cur[wl.lit.var()] >= 0);
        CHECK(wl.lit.eval(cur[wl.lit.var()]) == 0);
      }
    }
  }
}

TEST_CASE("optimum unchanged under lex constraints of detected generators") {
  std::mt19937_64 rng(67);
  int with_gens = 0;
  for (int iter = 0; iter < 500; ++iter) {
    Instance inst = testing::symmetric_instance(rng, static_cast<int>(testing::uniform(rng, 2, 10)));
    EngineProblem p = linearize(inst);
    auto gens = detect_symmetries(p);
    for (const Generator& g : gens) REQUIRE(validate_generator(p, g));
    if (!gens.empty()) ++with_gens;
    auto off = testing::engine_brute_force(p);
    auto on = optimum_with(p, gens);
    REQUIRE(off.feasible == on.feasible);
    if (off.feasible) CHECK(off.value == on.value);
  }
  CHECK(with_gens > 250);
}

TEST_CASE("detected generators preserve feasibility and objective on samples") {
  std::mt19937_64 rng(71);
  for (int iter = 0; iter < 100; ++iter) {
    testing::RandomSpec spec;
    spec.n_vars = static_cast<int>(testing::uniform(rng, 2, 6));
    spec.max_monomial = 2;
    spec.wbo = iter % 3 == 0;
    spec.max_coef = 2;
    EngineProblem p = linearize(testing::random_instance(rng, spec));
    for (const Generator& g : detect_symmetries(p)) {
      testing::for_each_assignment(p.n_total, [&](const std::vector<int>& x) {
        std::vector<int> y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[i] = x[g(static_cast<Var>(i))];
        REQUIRE(testing::engine_feasible(p, x) == testing::engine_feasible(p, y));
        CHECK(p.objective_value(x) == p.objective_value(y));
      });
    }
  }
}

TEST_CASE("orbits and root orbital fixing") {
  std::vector<Generator> gens{Generator({1, 2, 0, 3}), Generator({0, 1, 2, 3})};
  auto orb = orbits(4, gens);
  CHECK(orb == std::vector<Var>{0, 0, 0, 3});
  std::vector<int> vals{-1, 0, -1, -1};
  std::vector<char> usable{1, 1, 1, 1};
  CHECK(orbital_zero_fixings(orb, vals, usable) == std::vector<Var>{0, 2});
  usable[1] = 0;
  CHECK(orbital_zero_fixings(orb, vals, usable).empty());
}

TEST_CASE("detection is deterministic and respects the node limit") {
  std::string text;
  for (int a = 1; a <= 8; ++a)
    for (int b = a + 1; b <= 8; ++b) text += "+1 x" + std::to_string(a) + " +1 x" + std::to_string(b) + " >= 1;\n";
  EngineProblem p = linearize(parse_opb(text));
  auto a = detect_symmetries(p), b = detect_symmetries(p);
  CHECK(a == b);
  CHECK(group(8, a).size() == 40320);
  SymmetryStats stats;
  detect_symmetries(p, 2, &stats);
  CHECK(stats.limit_hit);
}
