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

// Hypergraph of the AND definitions and k-flower separation (k = 1, 2).
//
// For a center edge e and neighbors f_1..f_k intersecting e,
//   z_e + sum_i (1 - z_{f_i}) + sum_{v in R} (1 - x_v) >= 1,
// R = e minus the union of the f_i. Neighbors are reached only through the
// overlap sets of e.

#ifndef PBSOLVE_FLOWER_HPP_
#define PBSOLVE_FLOWER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "pbsolve/cut.hpp"
#include "pbsolve/model.hpp"

namespace pbsolve {

class Hypergraph {
 public:
  int num_edges() const { return static_cast<int>(edge_var_.size()); }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_overlaps() const { return static_cast<int>(overlap_start_.size()) - 1; }

  /// Node variables, sorted.
  std::span<const Var> nodes() const { return nodes_; }
  /// Product variable z_e of edge e.
  Var edge_var(int e) const { return edge_var_[e]; }
  /// Node variables of edge e, sorted.
  std::span<const Var> edge_nodes(int e) const { return slice(edge_nodes_, edge_node_start_, e); }
  /// Edges containing node index i (position in nodes()).
  std::span<const int> node_edges(int i) const { return slice(node_edges_, node_edge_start_, i); }
  /// Variables of overlap set o, sorted.
  std::span<const Var> overlap_nodes(int o) const { return slice(overlap_nodes_, overlap_start_, o); }
  /// Edges e such that o = e and f intersect for some other edge f.
  std::span<const int> overlap_edges(int o) const { return slice(overlap_edges_, overlap_edge_start_, o); }
  /// Overlap sets generated by edge e.
  std::span<const int> edge_overlaps(int e) const { return slice(edge_overlaps_, edge_overlap_start_, e); }

  /// Sum over edges e of sum over overlap sets o of e of |overlap_edges(o)|.
  std::uint64_t overlap_incidence_weight() const;

  friend Hypergraph build_hypergraph(const EngineProblem& problem);

 private:
  template <typename T>
  static std::span<const T> slice(const std::vector<T>& data, const std::vector<int>& start, int i) {
    return std::span<const T>(data).subspan(start[i], start[i + 1] - start[i]);
  }

  std::vector<Var> nodes_;
  std::vector<Var> edge_var_;
  std::vector<int> edge_node_start_{0};
  std::vector<Var> edge_nodes_;
  std::vector<int> node_edge_start_{0};
  std::vector<int> node_edges_;
  std::vector<int> overlap_start_{0};
  std::vector<Var> overlap_nodes_;
  std::vector<int> overlap_edge_start_{0};
  std::vector<int> overlap_edges_;
  std::vector<int> edge_overlap_start_{0};
  std::vector<int> edge_overlaps_;
};

Hypergraph build_hypergraph(const EngineProblem& problem);

struct FlowerStats {
  // Neighbor edges inspected through overlap sets.
  std::uint64_t candidates = 0;
};

/// Cuts violated by more than 1e-6 at `point` (indexed by engine variable),
/// most violated first, at most max_cuts. k is 1 or 2.
std::vector<Cut> separate_flower(const Hypergraph& graph, std::span<const double> point, int k, int max_cuts,
                                 FlowerStats* stats = nullptr);

}  // namespace pbsolve

#endif  // PBSOLVE_FLOWER_HPP_
