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
#include "pbsolve/fjump.hpp"
#include "support/families.hpp"
#include "support/oracles.hpp"
#include "support/random_instance.hpp"

using namespace pbsolve;

namespace {

NormConstraint row(std::vector<WeightedLit> lits, Int degree) { return {std::move(lits), degree}; }

}  // namespace

TEST_CASE("clause from all-zero start needs one flip") {
  FjState st(2, {row({{1, Lit::pos(0)}, {1, Lit::pos(1)}}, 1)}, {0, 0});
  CHECK(st.violated_rows().size() == 1);
  CHECK(st.score(0) == -1);
  st.flip(0);
  CHECK(st.violated_rows().empty());
}

TEST_CASE("2 x1 + x2 >= 3 reaches (1,1) quickly") {
  EngineProblem p = linearize(parse_opb("+2 x1 +1 x2 >= 3;"));
  FjConfig cfg;
  cfg.record_trace = true;
  FjResult r = fj_run(p, cfg);
  REQUIRE(r.solution);
  CHECK(*r.solution == std::vector<int>{1, 1});
  CHECK(r.trace.size() <= 3);
}

TEST_CASE("score of single literal row and of slack flips") {
  FjState st(1, {row({{1, Lit::pos(0)}}, 1)}, {0});
  CHECK(st.score(0) == -1);
  // x1 + x2 + x3 >= 1 at (1,1,1): slack 2 >= 1, flipping any costs nothing.
  FjState s2(3, {row({{1, Lit::pos(0)}, {1, Lit::pos(1)}, {1, Lit::pos(2)}}, 1)}, {1, 1, 1});
  for (Var v = 0; v < 3; ++v) CHECK(s2.score(v) == 0);
}

TEST_CASE("cached scores and activities match recomputation") {
  std::mt19937_64 rng(41);
  for (int iter = 0; iter < 100; ++iter) {
    int n = static_cast<int>(testing::uniform(rng, 3, 15));
    Instance inst = testing::planted_instance(rng, n, static_cast<int>(testing::uniform(rng, 1, 10)));
    EngineProblem p = linearize(inst);
    std::vector<int> start(p.n_total);
    for (int& v : start) v = static_cast<int>(testing::uniform(rng, 0, 1));
    FjState st(p.n_total, fj_rows(p), start);
    for (int step = 0; step < 60; ++step) {
      if (testing::uniform(rng, 0, 3) == 0 && !st.violated_rows().empty()) {
        st.bump_weight(st.violated_rows()[0]);
      } else {
        st.flip(static_cast<Var>(testing::uniform(rng, 0, p.n_total - 1)));
      }
      for (int r = 0; r < st.n_rows(); ++r) {
        REQUIRE(st.activity(r) == st.recompute_activity(r));
        bool listed = std::find(st.violated_rows().begin(), st.violated_rows().end(), r) != st.violated_rows().end();
        REQUIRE(listed == !testing::row_holds(st.row(r), st.values()));
      }
      for (Var v = 0; v < p.n_total; ++v) {
        REQUIRE(st.score(v) == st.score_from_scratch(v));
        bool good = std::find(st.improving_vars().begin(), st.improving_vars().end(), v) != st.improving_vars().end();
        REQUIRE(good == (st.score(v) < 0));
      }
    }
  }
}

TEST_CASE("solutions are feasible and never beat the optimum") {
  std::mt19937_64 rng(43);
  int found = 0;
  for (int iter = 0; iter < 200; ++iter) {
    int n = static_cast<int>(testing::uniform(rng, 2, 30));
    Instance inst = testing::planted_instance(rng, n, static_cast<int>(testing::uniform(rng, 1, 2 * n)));
    EngineProblem p = linearize(inst);
    FjConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(iter);
    cfg.max_flips = 200000;
    FjResult r = fj_run(p, cfg);
    if (!r.solution) continue;
    ++found;
    REQUIRE(testing::engine_feasible(p, *r.solution));
    Int128 v = p.objective_offset;
    for (int j = 0; j < p.n_total; ++j) v += Int128{p.objective[j]} * (*r.solution)[j];
    CHECK(v == r.objective);
    if (n <= 14) CHECK(testing::engine_brute_force(p).value <= r.objective);
  }
  CHECK(found >= 190);
}

TEST_CASE("nonlinear and top-cost instances stay feasible") {
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 200; ++iter) {
    testing::RandomSpec spec;
    spec.n_vars = static_cast<int>(testing::uniform(rng, 2, 7));
    spec.max_monomial = 3;
    spec.wbo = iter % 2 == 1;
    Instance inst = testing::random_instance(rng, spec);
    EngineProblem p = linearize(inst);
    FjConfig cfg;
    cfg.seed = 5;
    cfg.max_flips = 20000;
    FjResult r = fj_run(p, cfg);
    testing::EngineOptimum opt = testing::engine_brute_force(p);
    if (r.solution) {
      REQUIRE(testing::engine_feasible(p, *r.solution));
      CHECK(opt.feasible);
      CHECK(opt.value <= r.objective);
    }
  }
}

TEST_CASE("same seed gives the same trace") {
  std::mt19937_64 rng(53);
  for (int iter = 0; iter < 20; ++iter) {
    Instance inst = testing::planted_instance(rng, 25, 40);
    EngineProblem p = linearize(inst);
    FjConfig cfg;
    cfg.seed = 99;
    cfg.record_trace = true;
    cfg.max_flips = 5000;
    FjResult a = fj_run(p, cfg), b = fj_run(p, cfg);
    CHECK(a.trace == b.trace);
    CHECK(a.objective == b.objective);
  }
}

TEST_CASE("incumbent bound that cannot be beaten stops at once") {
  EngineProblem p = linearize(parse_opb("min: +1 x1 +1 x2;\n+1 x1 +1 x2 >= 1;"));
  FjConfig cfg;
  cfg.incumbent = 0;
  FjResult r = fj_run(p, cfg);
  CHECK_FALSE(r.solution);
  cfg.incumbent.reset();
  r = fj_run(p, cfg);
  REQUIRE(r.solution);
  CHECK(r.objective == 1);
}
