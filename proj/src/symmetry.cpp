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

#include "pbsolve/symmetry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace pbsolve {

namespace {

// Rows with literals sorted by code, as a sorted multiset.
std::vector<NormConstraint> canonical_rows(const EngineProblem& p, const std::vector<Var>* perm) {
  std::vector<NormConstraint> rows = p.hard;
  for (const IndicatorRow& ind : p.indicators)
    for (const NormConstraint& r : ind.rows) rows.push_back(indicator_as_row(ind.y, r));
  for (NormConstraint& r : rows) {
    if (perm)
      for (WeightedLit& wl : r.lits) wl.lit = Lit((*perm)[wl.lit.var()], wl.lit.negated());
    std::sort(r.lits.begin(), r.lits.end(), [](const WeightedLit& a, const WeightedLit& b) {
      return std::pair{a.lit.code(), a.coef} < std::pair{b.lit.code(), b.coef};
    });
  }
  auto key = [](const NormConstraint& r) {
    std::vector<std::pair<int, Int>> k;
    k.reserve(r.lits.size() + 1);
    k.push_back({-1, r.degree});
    for (const WeightedLit& wl : r.lits) k.push_back({wl.lit.code(), wl.coef});
    return k;
  };
  std::sort(rows.begin(), rows.end(), [&](const NormConstraint& a, const NormConstraint& b) { return key(a) < key(b); });
  return rows;
}

using Coloring = std::vector<int>;

// Color refinement on the detection graph. Node ids: variables first, then
// rows. Colors are ranks of sorted signatures, so two isomorphic inputs get
// the same colors on corresponding nodes.
class Refiner {
 public:
  explicit Refiner(const DetectionGraph& g) : g_(g), n_(g.n_vars + static_cast<int>(g.rows.size())) {
    var_rows_.resize(g.n_vars);
    for (int r = 0; r < static_cast<int>(g.rows.size()); ++r)
      for (auto [v, label] : g.rows[r]) var_rows_[v].push_back({r, label});
  }

  int size() const { return n_; }

  Coloring initial() const {
    std::vector<std::tuple<int, int, int>> sig(n_);
    for (int v = 0; v < g_.n_vars; ++v) sig[v] = {0, g_.var_color[v], 0};
    for (int r = 0; r < static_cast<int>(g_.rows.size()); ++r) sig[g_.n_vars + r] = {1, g_.row_color[r], 0};
    Coloring c = rank(sig);
    refine(c);
    return c;
  }

  Coloring individualize(const Coloring& c, int node) const {
    std::vector<std::pair<int, int>> sig(n_);
    for (int u = 0; u < n_; ++u) sig[u] = {c[u], u == node ? 1 : 0};
    Coloring out = rank(sig);
    refine(out);
    return out;
  }

 private:
  template <class Sig>
  static Coloring rank(const std::vector<Sig>& sig) {
    std::vector<int> order(sig.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    Coloring c(sig.size());
    int color = -1;
    for (size_t i = 0; i < order.size(); ++i) {
      if (i == 0 || sig[order[i - 1]] < sig[order[i]]) ++color;
      c[order[i]] = color;
    }
    return c;
  }

  static int count(const Coloring& c) { return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1; }

  void refine(Coloring& c) const {
    int colors = count(c);
    while (true) {
      std::vector<std::pair<int, std::vector<std::pair<int, int>>>> sig(n_);
      for (int v = 0; v < g_.n_vars; ++v) {
        auto& nb = sig[v].second;
        for (auto [r, label] : var_rows_[v]) nb.push_back({label, c[g_.n_vars + r]});
        std::sort(nb.begin(), nb.end());
        sig[v].first = c[v];
      }
      for (int r = 0; r < static_cast<int>(g_.rows.size()); ++r) {
        auto& nb = sig[g_.n_vars + r].second;
        for (auto [v, label] : g_.rows[r]) nb.push_back({label, c[v]});
        std::sort(nb.begin(), nb.end());
        sig[g_.n_vars + r].first = c[g_.n_vars + r];
      }
      c = rank(sig);
      int now = count(c);
      if (now == colors) return;
      colors = now;
    }
  }

  const DetectionGraph& g_;
  int n_;
  std::vector<std::vector<std::pair<int, int>>> var_rows_;
};

class Search {
 public:
  Search(const DetectionGraph& g, std::uint64_t node_limit) : g_(g), ref_(g), limit_(node_limit) {}

  std::vector<Generator> run(SymmetryStats& stats) {
    // First path: always the lowest variable of the target cell.
    Coloring c = ref_.initial();
    while (true) {
      path_.push_back(c);
      profile_.push_back(profile(c));
      int t = target(c);
      targets_.push_back(t);
      if (t < 0) break;
      int v = first_in(c, t);
      chosen_.push_back(v);
      c = ref_.individualize(c, v);
    }
    leaf_ = path_.back();
    leaf_node_.assign(ref_.size(), -1);
    for (int u = 0; u < ref_.size(); ++u) leaf_node_[leaf_[u]] = u;

    // Generators found at level >= k fix chosen_[0..k) pointwise.
    const int depth = static_cast<int>(chosen_.size());
    for (int k = depth - 1; k >= 0 && !stop_; --k) {
      const Coloring& ck = path_[k];
      for (int w = 0; w < g_.n_vars && !stop_; ++w) {
        if (ck[w] != targets_[k] || w == chosen_[k]) continue;
        if (in_orbit(chosen_[k], w)) continue;
        if (auto gen = descend(ref_.individualize(ck, w), k + 1)) gens_.push_back(std::move(*gen));
      }
    }
    stats.nodes = nodes_;
    stats.limit_hit = stop_;
    return std::move(gens_);
  }

 private:
  // Sizes of all color cells; equal along isomorphic branches.
  static std::vector<int> profile(const Coloring& c) {
    std::vector<int> p;
    for (int x : c) {
      if (x >= static_cast<int>(p.size())) p.resize(x + 1, 0);
      ++p[x];
    }
    return p;
  }

  // Smallest color of a variable cell with more than one member.
  int target(const Coloring& c) const {
    std::vector<int> cnt;
    for (int v = 0; v < g_.n_vars; ++v) {
      if (c[v] >= static_cast<int>(cnt.size())) cnt.resize(c[v] + 1, 0);
      ++cnt[c[v]];
    }
    for (int x = 0; x < static_cast<int>(cnt.size()); ++x)
      if (cnt[x] > 1) return x;
    return -1;
  }

  int first_in(const Coloring& c, int color) const {
    for (int v = 0; v < g_.n_vars; ++v)
      if (c[v] == color) return v;
    return -1;
  }

  bool in_orbit(Var a, Var b) const {
    std::vector<char> seen(g_.n_vars, 0);
    std::vector<Var> stack{a};
    seen[a] = 1;
    while (!stack.empty()) {
      Var x = stack.back();
      stack.pop_back();
      if (x == b) return true;
      for (const Generator& gen : gens_) {
        Var y = gen(x);
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    return false;
  }

  std::optional<Generator> descend(const Coloring& c, int d) {
    if (++nodes_ > limit_) {
      stop_ = true;
      return std::nullopt;
    }
    if (d >= static_cast<int>(profile_.size()) || profile(c) != profile_[d]) return std::nullopt;
    int t = target(c);
    if (t != targets_[d]) return std::nullopt;
    if (t < 0) return leaf(c);
    for (int u = 0; u < g_.n_vars && !stop_; ++u) {
      if (c[u] != t) continue;
      if (auto gen = descend(ref_.individualize(c, u), d + 1)) return gen;
    }
    return std::nullopt;
  }

  // gamma maps the first leaf onto this one; keep it if it is an automorphism.
  std::optional<Generator> leaf(const Coloring& c) const {
    std::vector<int> gamma(ref_.size(), -1);
    for (int u = 0; u < ref_.size(); ++u) gamma[leaf_node_[c[u]]] = u;
    for (int r = 0; r < static_cast<int>(g_.rows.size()); ++r) {
      int image = gamma[g_.n_vars + r] - g_.n_vars;
      if (image < 0) return std::nullopt;
      std::vector<std::pair<Var, int>> mapped;
      for (auto [v, label] : g_.rows[r]) mapped.push_back({gamma[v], label});
      std::sort(mapped.begin(), mapped.end());
      if (mapped != g_.rows[image]) return std::nullopt;
    }
    std::vector<Var> perm(gamma.begin(), gamma.begin() + g_.n_vars);
    return Generator(std::move(perm));
  }

  const DetectionGraph& g_;
  Refiner ref_;
  std::uint64_t limit_;
  std::uint64_t nodes_ = 0;
  bool stop_ = false;
  std::vector<Coloring> path_;
  std::vector<std::vector<int>> profile_;
  std::vector<int> targets_;
  std::vector<int> chosen_;
  Coloring leaf_;
  std::vector<int> leaf_node_;
  std::vector<Generator> gens_;
};

// Literal of v that is false under value.
Lit false_lit(Var v, int value) { return Lit(v, value == 1); }

}  // namespace

DetectionGraph build_detection_graph(const EngineProblem& p) {
  DetectionGraph g;
  g.n_vars = p.n_total;
  std::map<std::pair<int, Int>, int> var_colors;
  for (Var v = 0; v < p.n_total; ++v)
    var_colors.insert({{static_cast<int>(p.kinds[v]), p.objective[v]}, 0});
  int next = 0;
  for (auto& [k, id] : var_colors) id = next++;
  for (Var v = 0; v < p.n_total; ++v) g.var_color.push_back(var_colors[{static_cast<int>(p.kinds[v]), p.objective[v]}]);

  std::vector<NormConstraint> rows = canonical_rows(p, nullptr);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::map<std::pair<Int, Int>, int> labels;
  std::map<std::pair<Int, size_t>, int> row_colors;
  for (const NormConstraint& r : rows) {
    row_colors.insert({{r.degree, r.lits.size()}, 0});
    for (const WeightedLit& wl : r.lits) labels.insert({{wl.coef, wl.lit.negated() ? 1 : 0}, 0});
  }
  next = 0;
  for (auto& [k, id] : labels) id = next++;
  next = 0;
  for (auto& [k, id] : row_colors) id = next++;
  for (const NormConstraint& r : rows) {
    g.row_color.push_back(row_colors[{r.degree, r.lits.size()}]);
    std::vector<std::pair<Var, int>> adj;
    for (const WeightedLit& wl : r.lits) adj.push_back({wl.lit.var(), labels[{wl.coef, wl.lit.negated() ? 1 : 0}]});
    std::sort(adj.begin(), adj.end());
    g.rows.push_back(std::move(adj));
  }
  return g;
}

Generator::Generator(std::vector<Var> perm) : perm_(std::move(perm)) {
  for (Var v = 0; v < static_cast<Var>(perm_.size()); ++v)
    if (perm_[v] != v) support_.push_back(v);
}

std::vector<std::vector<Var>> Generator::cycles() const {
  std::vector<std::vector<Var>> out;
  std::vector<char> seen(perm_.size(), 0);
  for (Var v : support_) {
    if (seen[v]) continue;
    std::vector<Var> cyc;
    for (Var x = v; !seen[x]; x = perm_[x]) {
      seen[x] = 1;
      cyc.push_back(x);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

std::vector<Generator> detect_symmetries(const EngineProblem& problem, std::uint64_t node_limit, SymmetryStats* stats) {
  SymmetryStats local;
  if (problem.n_total == 0) return {};
  DetectionGraph g = build_detection_graph(problem);
  Search search(g, node_limit);
  std::vector<Generator> found = search.run(local);
  std::vector<Generator> out;
  for (Generator& gen : found)
    if (!gen.support().empty() && validate_generator(problem, gen)) out.push_back(std::move(gen));
  if (stats) *stats = local;
  return out;
}

bool validate_generator(const EngineProblem& problem, const Generator& gen) {
  const std::vector<Var>& perm = gen.perm();
  if (static_cast<int>(perm.size()) != problem.n_total) return false;
  std::vector<char> hit(perm.size(), 0);
  for (Var v = 0; v < problem.n_total; ++v) {
    Var w = perm[v];
    if (w < 0 || w >= problem.n_total || hit[w]) return false;
    hit[w] = 1;
    if (problem.kinds[w] != problem.kinds[v] || problem.objective[w] != problem.objective[v]) return false;
  }
  return canonical_rows(problem, nullptr) == canonical_rows(problem, &perm);
}

LexOutcome lex_leader_propagate(const Generator& gen, std::span<const int> values) {
  LexOutcome out;
  std::vector<int> val(values.begin(), values.end());
  // False literals that keep the compared prefix equal.
  std::vector<Lit> prefix;
  auto clause = [&](std::initializer_list<Lit> extra) {
    NormConstraint c;
    c.degree = 1;
    std::vector<Lit> lits(prefix);
    lits.insert(lits.end(), extra);
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (Lit l : lits) c.lits.push_back({1, l});
    return c;
  };
  for (Var i : gen.support()) {
    const Var j = gen(i);
    int a = val[i], b = val[j];
    if (a >= 0 && b >= 0) {
      if (a > b) return out;
      if (a < b) {
        out.conflict = clause({Lit::pos(i), Lit::neg(j)});
        return out;
      }
    } else if (a == 0) {
      // x_i = 0 forces x_j = 0
      out.fixings.push_back({Lit::neg(j), clause({Lit::pos(i), Lit::neg(j)})});
      val[j] = 0;
    } else if (b == 1) {
      out.fixings.push_back({Lit::pos(i), clause({Lit::pos(i), Lit::neg(j)})});
      val[i] = 1;
    } else {
      return out;
    }
    prefix.push_back(false_lit(i, val[i]));
    prefix.push_back(false_lit(j, val[j]));
  }
  return out;
}

std::vector<Var> orbits(int n_vars, const std::vector<Generator>& gens) {
  std::vector<Var> parent(n_vars);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Var v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Generator& g : gens)
    for (Var v : g.support()) {
      Var a = find(v), b = find(g(v));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<Var> out(n_vars);
  for (Var v = 0; v < n_vars; ++v) out[v] = find(v);
  return out;
}

std::vector<Var> orbital_zero_fixings(const std::vector<Var>& orbit, std::span<const int> values,
                                      std::span<const char> usable) {
  std::vector<char> zero(orbit.size(), 0);
  for (Var v = 0; v < static_cast<Var>(orbit.size()); ++v)
    if (values[v] == 0 && usable[v]) zero[orbit[v]] = 1;
  std::vector<Var> out;
  for (Var v = 0; v < static_cast<Var>(orbit.size()); ++v)
    if (values[v] < 0 && zero[orbit[v]]) out.push_back(v);
  return out;
}

}  // namespace pbsolve
