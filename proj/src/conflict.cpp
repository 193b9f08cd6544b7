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

#include "pbsolve/conflict.hpp"

#include <algorithm>
#include <limits>

namespace pbsolve {

namespace {

constexpr int kUnassignedLevel = std::numeric_limits<int>::max();

// Literal false among the first `limit` trail entries.
bool false_in_prefix(const PropEngine& e, Lit l, int limit) {
  return e.is_false(l) && e.trail_pos(l.var()) < limit;
}

// Level at which `l` is assigned within the prefix, else kUnassignedLevel.
int prefix_level(const PropEngine& e, Lit l, int limit) {
  Var v = l.var();
  if (e.value(v) < 0 || e.trail_pos(v) >= limit) return kUnassignedLevel;
  return e.level(v);
}

Int128 prefix_slack(const NormConstraint& row, const PropEngine& e, int limit) {
  Int128 s = -Int128{row.degree};
  for (const WeightedLit& wl : row.lits)
    if (!false_in_prefix(e, wl.lit, limit)) s += wl.coef;
  return s;
}

std::optional<int> prefix_assertion_level(const NormConstraint& row, const PropEngine& e, int limit) {
  std::vector<int> false_levels;
  Int128 total = -Int128{row.degree};
  for (const WeightedLit& wl : row.lits) {
    total += wl.coef;
    if (false_in_prefix(e, wl.lit, limit)) false_levels.push_back(e.level(wl.lit.var()));
  }
  if (false_levels.empty()) return std::nullopt;
  std::sort(false_levels.begin(), false_levels.end());
  false_levels.erase(std::unique(false_levels.begin(), false_levels.end()), false_levels.end());
  const int top = false_levels.back();
  std::vector<int> candidates{0};
  for (int lvl : false_levels)
    if (lvl > 0 && lvl < top) candidates.push_back(lvl);
  for (int lvl : candidates) {
    Int128 s = total;
    Int max_free = 0;
    for (const WeightedLit& wl : row.lits) {
      int at = prefix_level(e, wl.lit, limit);
      if (at <= lvl) {
        if (false_in_prefix(e, wl.lit, limit)) s -= wl.coef;
      } else {
        max_free = std::max(max_free, wl.coef);
      }
    }
    if (s < 0) return std::nullopt;
    if (max_free > s) return lvl;
  }
  return std::nullopt;
}

// Sparse working constraint. Coefficients are signed: k > 0 means k * x,
// k < 0 means |k| * ~x.
class Work {
 public:
  void reset(int n) {
    if (static_cast<int>(coef_.size()) < n) {
      coef_.resize(n, 0);
      in_.resize(n, 0);
    }
    for (Var v : support_) {
      coef_[v] = 0;
      in_[v] = 0;
    }
    support_.clear();
    degree = 0;
  }

  void add_lit(Lit l, Int128 a) {
    Var v = l.var();
    if (!in_[v]) {
      in_[v] = 1;
      support_.push_back(v);
    }
    Int128 k = coef_[v];
    Int128 signed_a = l.negated() ? -a : a;
    if (k == 0 || (k > 0) == (signed_a > 0)) {
      coef_[v] = k + signed_a;
      return;
    }
    // a * l + b * ~l = min(a, b) + |a - b| * (larger side)
    Int128 ak = k < 0 ? -k : k;
    degree -= std::min(ak, a);
    coef_[v] = k + signed_a;
  }

  void add_row(const NormConstraint& row, Int128 mult) {
    for (const WeightedLit& wl : row.lits) add_lit(wl.lit, mult * wl.coef);
    degree += mult * row.degree;
  }

  void saturate() {
    for (Var v : support_) {
      Int128& k = coef_[v];
      if (k > degree) k = degree;
      if (-k > degree) k = -degree;
    }
  }

  Int128 coef_of(Lit l) const {
    Int128 k = coef_[l.var()];
    if (l.negated()) return k < 0 ? -k : 0;
    return k > 0 ? k : 0;
  }

  void drop(Var v) { coef_[v] = 0; }

  const std::vector<Var>& support() const { return support_; }

  NormConstraint export_row() const {
    NormConstraint row;
    row.degree = static_cast<Int>(degree);
    for (Var v : support_) {
      Int128 k = coef_[v];
      if (k > 0) row.lits.push_back({static_cast<Int>(k), Lit::pos(v)});
      if (k < 0) row.lits.push_back({static_cast<Int>(-k), Lit::neg(v)});
    }
    std::stable_sort(row.lits.begin(), row.lits.end(),
                     [](const WeightedLit& a, const WeightedLit& b) { return a.coef > b.coef; });
    return row;
  }

  Int128 degree = 0;

 private:
  std::vector<Int128> coef_;
  std::vector<std::uint8_t> in_;
  std::vector<Var> support_;
};

Work& work_for(int n) {
  thread_local Work w;
  w.reset(n);
  return w;
}

// Weakens the non-false literals of `reason` whose coefficient is not a
// multiple of the coefficient of `pivot`, then divides by that coefficient.
NormConstraint reduce_reason(const NormConstraint& reason, Lit pivot, const PropEngine& e, int limit) {
  Int r = 0;
  for (const WeightedLit& wl : reason.lits)
    if (wl.lit == pivot) r = wl.coef;
  if (r <= 1) return reason;
  NormConstraint kept;
  kept.degree = reason.degree;
  for (const WeightedLit& wl : reason.lits) {
    if (wl.lit != pivot && !false_in_prefix(e, wl.lit, limit) && wl.coef % r != 0) {
      kept.degree -= wl.coef;
      continue;
    }
    kept.lits.push_back(wl);
  }
  return divide_ceil(kept, r);
}

Var max_var(const NormConstraint& row) {
  Var m = 0;
  for (const WeightedLit& wl : row.lits) m = std::max(m, wl.lit.var());
  return m;
}

}  // namespace

NormConstraint divide_ceil(const NormConstraint& row, Int d) {
  NormConstraint out;
  out.degree = static_cast<Int>(ceil_div(row.degree, d));
  for (const WeightedLit& wl : row.lits) out.lits.push_back({static_cast<Int>(ceil_div(wl.coef, d)), wl.lit});
  return out;
}

NormConstraint resolve(const NormConstraint& conflict, const NormConstraint& reason, Lit pivot) {
  Work& w = work_for(1 + std::max(max_var(conflict), max_var(reason)));
  w.add_row(conflict, 1);
  w.add_row(reason, w.coef_of(~pivot));
  w.saturate();
  return w.export_row();
}

void saturate(NormConstraint& row) {
  for (WeightedLit& wl : row.lits) wl.coef = std::min(wl.coef, row.degree);
}

std::optional<int> assertion_level(const NormConstraint& row, const PropEngine& engine) {
  return prefix_assertion_level(row, engine, engine.num_assigned());
}

AnalysisResult analyze_clause(const PropEngine& e, const NormConstraint& conflict, bool conflict_tainted) {
  AnalysisResult res;
  res.clause_fallback = true;
  res.tainted = conflict_tainted;
  int top = -1;
  for (const WeightedLit& wl : conflict.lits)
    if (e.is_false(wl.lit)) top = std::max(top, e.level(wl.lit.var()));
  if (top <= 0) {
    res.unsat = true;
    return res;
  }
  thread_local std::vector<std::uint8_t> seen;
  if (static_cast<int>(seen.size()) < e.n_vars()) seen.resize(e.n_vars(), 0);
  std::vector<Var> touched;
  std::vector<Lit> others;
  int count = 0;
  auto process = [&](const NormConstraint& row, Lit skip, int limit) {
    for (const WeightedLit& wl : row.lits) {
      Lit l = wl.lit;
      if (l == skip || !false_in_prefix(e, l, limit)) continue;
      Var v = l.var();
      if (seen[v]) continue;
      seen[v] = 1;
      touched.push_back(v);
      if (e.level(v) == 0) continue;
      if (e.level(v) == top) {
        ++count;
      } else {
        others.push_back(l);
      }
    }
  };
  process(conflict, Lit(), e.num_assigned());
  int idx = e.level_end(top) - 1;
  Lit uip;
  for (;;) {
    while (!seen[e.trail()[idx].var()]) --idx;
    Lit t = e.trail()[idx];
    Var v = t.var();
    if (--count == 0) {
      uip = ~t;
      break;
    }
    process(e.reason_row(v), t, idx);
    res.tainted = res.tainted || e.reason_tainted(v);
    if (e.reason(v) >= 0) res.reasons_used.push_back(e.reason(v));
    --idx;
  }
  res.learned.degree = 1;
  res.learned.lits.push_back({1, uip});
  int back = 0;
  for (Lit l : others) {
    res.learned.lits.push_back({1, l});
    back = std::max(back, e.level(l.var()));
  }
  res.backjump_level = back;
  for (Var v : touched) seen[v] = 0;
  res.vars_seen = std::move(touched);
  return res;
}

AnalysisResult analyze(const PropEngine& e, const NormConstraint& conflict, bool conflict_tainted) {
  AnalysisResult res;
  res.tainted = conflict_tainted;
  Work& w = work_for(e.n_vars());
  w.add_row(conflict, 1);
  int limit = e.num_assigned();
  for (;;) {
    NormConstraint cur = w.export_row();
    Int128 s = prefix_slack(cur, e, limit);
    int top = -1;
    Int128 top_weight = 0;
    for (const WeightedLit& wl : cur.lits) {
      if (!false_in_prefix(e, wl.lit, limit)) continue;
      int lvl = e.level(wl.lit.var());
      if (lvl > top) {
        top = lvl;
        top_weight = 0;
      }
      if (lvl == top) top_weight += wl.coef;
    }
    if (s >= 0) return analyze_clause(e, conflict, conflict_tainted);
    if (top <= 0) {
      res.unsat = true;
      return res;
    }
    if (s + top_weight < 0) {
      // Already falsified below `top`.
      limit = e.level_end(top - 1);
      continue;
    }
    if (auto lvl = prefix_assertion_level(cur, e, limit)) {
      for (Var v : w.support()) {
        Lit l = w.coef_of(Lit::pos(v)) > 0 ? Lit::pos(v) : Lit::neg(v);
        if (e.value(v) >= 0 && e.level(v) == 0 && e.is_false(l)) w.drop(v);
      }
      res.learned = w.export_row();
      saturate(res.learned);
      res.backjump_level = *lvl;
      res.vars_seen = w.support();
      return res;
    }
    int idx = limit - 1;
    while (idx >= 0 && w.coef_of(~e.trail()[idx]) == 0) --idx;
    if (idx < 0) return analyze_clause(e, conflict, conflict_tainted);
    Lit t = e.trail()[idx];
    Var v = t.var();
    if (e.reason(v) == kDecisionReason) return analyze_clause(e, conflict, conflict_tainted);
    Int128 c = w.coef_of(~t);
    NormConstraint reduced = reduce_reason(e.reason_row(v), t, e, idx);
    w.add_row(reduced, c);
    w.saturate();
    if (w.degree > kMaxCoefficient || w.degree <= 0) return analyze_clause(e, conflict, conflict_tainted);
    res.tainted = res.tainted || e.reason_tainted(v);
    if (e.reason(v) >= 0) res.reasons_used.push_back(e.reason(v));
    limit = idx;
  }
}

}  // namespace pbsolve
