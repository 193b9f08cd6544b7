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
#include "pbsolve/flower.hpp"
#include "support/oracles.hpp"
#include "support/random_instance.hpp"

using namespace pbsolve;

namespace {

// Builds an engine problem whose AND definitions are exactly `edges`
// (1-based original variables).
EngineProblem with_edges(int n, const std::vector<std::vector<int>>& edges) {
  Instance inst;
  inst.n_vars = n;
  PbConstraint c;
  for (const auto& e : edges) c.terms.push_back({1, e});
  c.rhs = 0;
  inst.constraints.push_back(c);
  return linearize(inst);
}

std::vector<std::vector<int>> random_edges(std::mt19937_64& rng, int n, int m) {
  std::set<std::vector<int>> edges;
  for (int tries = 0; tries < 100 && static_cast<int>(edges.size()) < m; ++tries) {
    auto mono = testing::random_monomial(rng, n, std::min(n, 4));
    if (mono.size() >= 2) edges.insert(mono);
  }
  return {edges.begin(), edges.end()};
}

// Full assignment from original values with z = product.
std::vector<int> expand(const EngineProblem& p, const std::vector<int>& x) {
  std::vector<int> full(x);
  complete_assignment(p, full);
  return full;
}

// Most violated 1-flower by scanning every ordered pair of edges.
double brute_best_one_flower(const Hypergraph& g, const std::vector<double>& pt) {
  double best = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    auto en = g.edge_nodes(e);
    for (int f = 0; f < g.num_edges(); ++f) {
      if (f == e) continue;
      auto fn = g.edge_nodes(f);
      bool meets = false;
      double lhs = pt[g.edge_var(e)] + 1.0 - pt[g.edge_var(f)];
      for (Var v : en) {
        if (std::find(fn.begin(), fn.end(), v) != fn.end()) {
          meets = true;
        } else {
          lhs += 1.0 - pt[v];
        }
      }
      if (meets) best = std::max(best, 1.0 - lhs);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("overlap set examples") {
  {
    Hypergraph g = build_hypergraph(with_edges(4, {{1, 2, 3}, {2, 3, 4}}));
    REQUIRE(g.num_overlaps() == 1);
    CHECK(std::vector<Var>(g.overlap_nodes(0).begin(), g.overlap_nodes(0).end()) == std::vector<Var>{1, 2});
    CHECK(g.overlap_edges(0).size() == 2);
  }
  {
    Hypergraph g = build_hypergraph(with_edges(3, {{1, 2, 3}}));
    CHECK(g.num_edges() == 1);
    CHECK(g.num_overlaps() == 0);
  }
  {
    Hypergraph g = build_hypergraph(with_edges(7, {{5, 1}, {5, 2}, {5, 3}}));
    REQUIRE(g.num_overlaps() == 1);
    CHECK(std::vector<Var>(g.overlap_nodes(0).begin(), g.overlap_nodes(0).end()) == std::vector<Var>{4});
    CHECK(g.overlap_edges(0).size() == 3);
  }
  CHECK(build_hypergraph(with_edges(2, {})).num_edges() == 0);
}

TEST_CASE("one-flower example cut") {
  EngineProblem p = with_edges(4, {{1, 2, 3}, {2, 3, 4}});
  Hypergraph g = build_hypergraph(p);
  const Var ze = g.edge_var(0), zf = g.edge_var(1);
  std::vector<double> pt(p.n_total, 0.0);
  pt[zf] = 1.0;
  pt[0] = 1.0;
  pt[1] = pt[2] = pt[3] = 1.0;
  auto cuts = separate_flower(g, pt, 1, 100);
  REQUIRE(cuts.size() == 1);
  // z_e + (1 - z_f) + (1 - x_1) >= 1  <=>  z_e - z_f - x_1 >= -1
  Cut want{{{0, -1}, {ze, 1}, {zf, -1}}, -1, CutKind::kFlower1};
  want.canonicalize();
  CHECK(fingerprint(cuts[0]) == fingerprint(want));
  CHECK(cuts[0].violation(pt) == doctest::Approx(1.0));
}

TEST_CASE("incidence views are transposes") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    int n = static_cast<int>(testing::uniform(rng, 3, 8));
    EngineProblem p = with_edges(n, random_edges(rng, n, static_cast<int>(testing::uniform(rng, 1, 6))));
    Hypergraph g = build_hypergraph(p);
    std::set<std::pair<int, Var>> row, col;
    for (int e = 0; e < g.num_edges(); ++e)
      for (Var v : g.edge_nodes(e)) row.insert({e, v});
    for (int i = 0; i < g.num_nodes(); ++i)
      for (int e : g.node_edges(i)) col.insert({e, g.nodes()[i]});
    CHECK(row == col);
    // Every intersecting pair shares a recorded overlap set equal to e & f.
    for (int e = 0; e < g.num_edges(); ++e)
      for (int f = e + 1; f < g.num_edges(); ++f) {
        std::vector<Var> common;
        auto en = g.edge_nodes(e), fn = g.edge_nodes(f);
        std::set_intersection(en.begin(), en.end(), fn.begin(), fn.end(), std::back_inserter(common));
        if (common.empty()) continue;
        bool found = false;
        for (int o : g.edge_overlaps(e)) {
          auto on = g.overlap_nodes(o);
          auto oe = g.overlap_edges(o);
          if (std::vector<Var>(on.begin(), on.end()) == common && std::find(oe.begin(), oe.end(), f) != oe.end())
            found = true;
        }
        CHECK(found);
      }
  }
}

TEST_CASE("flower cuts are valid, sorted, complete and within the work bound") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 400; ++iter) {
    int n = static_cast<int>(testing::uniform(rng, 3, 8));
    int m = static_cast<int>(testing::uniform(rng, 1, 6));
    EngineProblem p = with_edges(n, random_edges(rng, n, m));
    Hypergraph g = build_hypergraph(p);
    std::vector<double> pt(p.n_total);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& v : pt) v = unit(rng) < 0.3 ? std::round(unit(rng)) : unit(rng);
    for (int k = 1; k <= 2; ++k) {
      FlowerStats stats;
      auto cuts = separate_flower(g, pt, k, 1000, &stats);
      CHECK(stats.candidates <= g.overlap_incidence_weight());
      for (size_t i = 0; i < cuts.size(); ++i) {
        CHECK(cuts[i].violation(pt) > 1e-6);
        if (i > 0) CHECK(cuts[i - 1].violation(pt) >= cuts[i].violation(pt));
      }
      testing::for_each_assignment(n, [&](const std::vector<int>& x) {
        auto full = expand(p, x);
        for (const Cut& c : cuts) REQUIRE(c.satisfied_by(full));
      });
      if (k == 1) {
        double want = brute_best_one_flower(g, pt);
        double got = cuts.empty() ? 0.0 : cuts[0].violation(pt);
        if (want > 1e-6) CHECK(got == doctest::Approx(want));
        else CHECK(cuts.empty());
      }
    }
  }
}

TEST_CASE("max_cuts truncates") {
  std::mt19937_64 rng(19);
  EngineProblem p = with_edges(8, random_edges(rng, 8, 6));
  Hypergraph g = build_hypergraph(p);
  std::vector<double> pt(p.n_total, 0.5);
  for (const AndDef& d : p.and_defs) pt[d.z] = 0.0;
  auto all = separate_flower(g, pt, 2, 1000);
  auto few = separate_flower(g, pt, 2, 2);
  CHECK(few.size() == std::min<size_t>(2, all.size()));
}
