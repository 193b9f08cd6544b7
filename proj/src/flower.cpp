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

#include "pbsolve/flower.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace pbsolve {

namespace {

struct VecHash {
  size_t operator()(const std::vector<Var>& v) const noexcept {
    size_t h = v.size();
    for (Var x : v) h ^= std::hash<Var>()(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

template <typename T>
void flatten(const std::vector<std::vector<T>>& lists, std::vector<int>& start, std::vector<T>& data) {
  start.assign(1, 0);
  data.clear();
  for (const auto& l : lists) {
    data.insert(data.end(), l.begin(), l.end());
    start.push_back(static_cast<int>(data.size()));
  }
}

constexpr double kMinViolation = 1e-6;

}  // namespace

std::uint64_t Hypergraph::overlap_incidence_weight() const {
  std::uint64_t w = 0;
  for (int e = 0; e < num_edges(); ++e)
    for (int o : edge_overlaps(e)) w += overlap_edges(o).size();
  return w;
}

Hypergraph build_hypergraph(const EngineProblem& problem) {
  Hypergraph g;
  for (const AndDef& def : problem.and_defs) g.nodes_.insert(g.nodes_.end(), def.operands.begin(), def.operands.end());
  std::sort(g.nodes_.begin(), g.nodes_.end());
  g.nodes_.erase(std::unique(g.nodes_.begin(), g.nodes_.end()), g.nodes_.end());
  std::vector<int> node_index(problem.n_total, -1);
  for (int i = 0; i < g.num_nodes(); ++i) node_index[g.nodes_[i]] = i;

  for (const AndDef& def : problem.and_defs) {
    g.edge_var_.push_back(def.z);
    g.edge_nodes_.insert(g.edge_nodes_.end(), def.operands.begin(), def.operands.end());
    g.edge_node_start_.push_back(static_cast<int>(g.edge_nodes_.size()));
  }

  // Transpose in one counting pass.
  std::vector<int> count(g.num_nodes() + 1, 0);
  for (Var v : g.edge_nodes_) ++count[node_index[v] + 1];
  for (int i = 0; i < g.num_nodes(); ++i) count[i + 1] += count[i];
  g.node_edge_start_ = count;
  g.node_edges_.assign(g.edge_nodes_.size(), 0);
  for (int e = 0; e < g.num_edges(); ++e)
    for (Var v : g.edge_nodes(e)) g.node_edges_[count[node_index[v]]++] = e;

  // Each intersecting pair is visited at its smallest common node.
  std::unordered_map<std::vector<Var>, int, VecHash> overlap_id;
  std::vector<std::vector<Var>> overlap_nodes;
  std::vector<std::vector<int>> overlap_edges;
  std::vector<std::vector<int>> edge_overlaps(g.num_edges());
  std::vector<Var> common;
  for (int i = 0; i < g.num_nodes(); ++i) {
    auto incident = g.node_edges(i);
    for (size_t a = 0; a < incident.size(); ++a) {
      for (size_t b = a + 1; b < incident.size(); ++b) {
        int e = incident[a], f = incident[b];
        common.clear();
        auto en = g.edge_nodes(e), fn = g.edge_nodes(f);
        std::set_intersection(en.begin(), en.end(), fn.begin(), fn.end(), std::back_inserter(common));
        if (common.front() != g.nodes_[i]) continue;
        auto [it, inserted] = overlap_id.try_emplace(common, static_cast<int>(overlap_nodes.size()));
        if (inserted) {
          overlap_nodes.push_back(common);
          overlap_edges.emplace_back();
        }
        overlap_edges[it->second].push_back(e);
        overlap_edges[it->second].push_back(f);
      }
    }
  }
  for (int o = 0; o < static_cast<int>(overlap_edges.size()); ++o) {
    auto& list = overlap_edges[o];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (int e : list) edge_overlaps[e].push_back(o);
  }
  flatten(overlap_nodes, g.overlap_start_, g.overlap_nodes_);
  flatten(overlap_edges, g.overlap_edge_start_, g.overlap_edges_);
  flatten(edge_overlaps, g.edge_overlap_start_, g.edge_overlaps_);
  return g;
}

std::vector<Cut> separate_flower(const Hypergraph& g, std::span<const double> point, int k, int max_cuts,
                                 FlowerStats* stats) {
  std::vector<Cut> cuts;
  std::set<CutFingerprint> seen;
  std::unordered_map<Var, int> pos_in_e;
  for (int e = 0; e < g.num_edges(); ++e) {
    const Var ze = g.edge_var(e);
    if (point[ze] >= 1.0 - kMinViolation) continue;
    auto en = g.edge_nodes(e);
    pos_in_e.clear();
    for (int j = 0; j < static_cast<int>(en.size()); ++j) pos_in_e[en[j]] = j;

    // Footprint on e -> neighbor with the largest z_f.
    std::map<std::vector<bool>, int> best;
    for (int o : g.edge_overlaps(e)) {
      auto neighbors = g.overlap_edges(o);
      if (stats) stats->candidates += neighbors.size();
      for (int f : neighbors) {
        if (f == e) continue;
        std::vector<bool> foot(en.size(), false);
        for (Var v : g.edge_nodes(f)) {
          auto it = pos_in_e.find(v);
          if (it != pos_in_e.end()) foot[it->second] = true;
        }
        auto [it, inserted] = best.try_emplace(std::move(foot), f);
        if (!inserted && point[g.edge_var(f)] > point[g.edge_var(it->second)]) it->second = f;
      }
    }

    std::vector<std::pair<const std::vector<bool>*, int>> reps;
    for (const auto& [foot, f] : best) reps.push_back({&foot, f});
    auto emit = [&](std::vector<int> neighbors, const std::vector<bool>& covered) {
      Cut cut;
      cut.kind = k == 1 ? CutKind::kFlower1 : CutKind::kFlower2;
      cut.terms.push_back({ze, 1});
      Int rhs = 1 - static_cast<Int>(neighbors.size());
      for (int f : neighbors) cut.terms.push_back({g.edge_var(f), -1});
      for (int j = 0; j < static_cast<int>(en.size()); ++j) {
        if (covered[j]) continue;
        cut.terms.push_back({en[j], -1});
        --rhs;
      }
      cut.rhs = rhs;
      cut.canonicalize();
      if (cut.violation(point) <= kMinViolation) return;
      if (seen.insert(fingerprint(cut)).second) cuts.push_back(std::move(cut));
    };
    if (k == 1) {
      for (const auto& [foot, f] : reps) emit({f}, *foot);
    } else {
      for (size_t a = 0; a < reps.size(); ++a) {
        for (size_t b = a + 1; b < reps.size(); ++b) {
          std::vector<bool> covered(en.size());
          for (size_t j = 0; j < en.size(); ++j) covered[j] = (*reps[a].first)[j] || (*reps[b].first)[j];
          emit({reps[a].second, reps[b].second}, covered);
        }
      }
    }
  }
  std::vector<double> violation(cuts.size());
  for (size_t i = 0; i < cuts.size(); ++i) violation[i] = cuts[i].violation(point);
  std::vector<size_t> order(cuts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return violation[a] > violation[b]; });
  std::vector<Cut> out;
  for (size_t i = 0; i < order.size() && static_cast<int>(out.size()) < max_cuts; ++i)
    out.push_back(std::move(cuts[order[i]]));
  return out;
}

}  // namespace pbsolve
