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

#include <random>

#include "doctest.h"
#include "pbsolve/rlt.hpp"
#include "support/oracles.hpp"
#include "support/random_instance.hpp"

using namespace pbsolve;

TEST_CASE("product table entries") {
  EngineProblem p = linearize(parse_opb("+1 x1 x2 +1 x1 x2 x3 >= 0;"));
  ProductTable t = build_product_table(p);
  const Var z12 = p.and_defs[0].z, w = p.and_defs[1].z;
  REQUIRE(t.find(0, 1));
  CHECK(t.find(1, 0)->exact == z12);
  CHECK(t.find(0, 1)->relaxed == std::vector<Var>{w});
  CHECK_FALSE(t.find(0, 2)->exact.has_value());
  CHECK(t.find(0, 2)->relaxed == std::vector<Var>{w});
  CHECK(t.find(1, 2)->relaxed == std::vector<Var>{w});
  CHECK(t.factor_vars() == std::vector<Var>{0, 1, 2});
  CHECK(build_product_table(linearize(parse_opb("+1 x1 +1 x2 >= 1;"))).empty());
}

TEST_CASE("rlt examples with an exact product") {
  EngineProblem p = linearize(parse_opb("+1 x1 x2 >= 0;"));
  ProductTable t = build_product_table(p);
  const Var z = p.and_defs[0].z;
  Cut row{{{0, 1}, {1, 1}}, 1, CutKind::kModel};
  // Point violating x1 + x2 - z >= 1 but not z >= 0.
  std::vector<double> pt(p.n_total, 0.0);
  pt[0] = 0.5;
  pt[1] = 0.5;
  pt[z] = 0.5;
  auto cuts = separate_rlt(row, 1, t, pt);
  REQUIRE(cuts.size() == 1);
  Cut want{{{0, 1}, {1, 1}, {z, -1}}, 1, CutKind::kRlt};
  want.canonicalize();
  CHECK(fingerprint(cuts[0]) == fingerprint(want));
  // Truth table of x1 + x2 - x1 x2 >= 1 against the row: same 0/1 points.
  testing::for_each_assignment(2, [&](const std::vector<int>& x) {
    bool lhs = x[0] + x[1] - x[0] * x[1] >= 1;
    CHECK(lhs == (x[0] + x[1] >= 1));
  });
}

TEST_CASE("square terms reduce to the factor") {
  EngineProblem p = linearize(parse_opb("+1 x1 x2 >= 0;"));
  ProductTable t = build_product_table(p);
  Cut row{{{0, 2}, {2, 1}}, 2, CutKind::kModel};
  std::vector<double> pt(p.n_total, 0.3);
  // x1 * (2 x1 + x3 - 2): 2 x1 + (x1 x3 <= min) - 2 x1 -> only linear terms.
  for (const Cut& c : separate_rlt(row, 0, t, pt))
    for (const auto& term : c.terms) CHECK(term.var < p.n_total);
}

TEST_CASE("rlt cuts are valid on every feasible point") {
  std::mt19937_64 rng(29);
  int emitted = 0;
  for (int iter = 0; iter < 300; ++iter) {
    testing::RandomSpec spec;
    spec.n_vars = static_cast<int>(testing::uniform(rng, 3, 8));
    spec.n_constraints = static_cast<int>(testing::uniform(rng, 1, 4));
    spec.max_monomial = 3;
    spec.max_terms = 4;
    spec.objective = false;
    Instance inst = testing::random_instance(rng, spec);
    EngineProblem p = linearize(inst);
    ProductTable t = build_product_table(p);
    std::vector<double> pt(p.n_total);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& v : pt) v = unit(rng);
    std::vector<Cut> cuts;
    for (const NormConstraint& r : p.hard) {
      Cut row = cut_from_row(r, CutKind::kModel);
      for (Var k = 0; k < p.n_orig; ++k)
        for (Cut& c : separate_rlt(row, k, t, pt)) cuts.push_back(std::move(c));
    }
    for (Cut& c : separate_rlt_round(p, t, pt)) cuts.push_back(std::move(c));
    emitted += static_cast<int>(cuts.size());
    for (const Cut& c : cuts) CHECK(c.violation(pt) > 1e-6);
    testing::for_each_assignment(p.n_orig, [&](const std::vector<int>& x) {
      std::vector<int> full(x);
      complete_assignment(p, full);
      if (!p.feasible(full)) return;
      for (const Cut& c : cuts) REQUIRE(c.satisfied_by(full));
    });
  }
  CHECK(emitted > 100);
}
