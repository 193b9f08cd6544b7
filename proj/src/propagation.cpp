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

#include "pbsolve/propagation.hpp"

#include <algorithm>
#include <cassert>

namespace pbsolve {

PropEngine::PropEngine(int n_vars)
    : value_(n_vars, -1), level_(n_vars, -1), pos_(n_vars, -1), reason_(n_vars, kDecisionReason),
      watches_(2 * static_cast<size_t>(n_vars)) {}

int PropEngine::level_end(int lvl) const {
  if (lvl >= decision_level()) return num_assigned();
  return level_start_[lvl];
}

void PropEngine::assign(Lit l, Reason r) {
  assert(value_[l.var()] < 0);
  value_[l.var()] = l.negated() ? 0 : 1;
  level_[l.var()] = decision_level();
  pos_[l.var()] = static_cast<int>(trail_.size());
  reason_[l.var()] = r;
  trail_.push_back(l);
  ++propagations_;
}

void PropEngine::decide(Lit l) {
  level_start_.push_back(static_cast<int>(trail_.size()));
  ext_start_.push_back(ext_reasons_.size());
  assign(l, kDecisionReason);
}

void PropEngine::backjump(int lvl) {
  if (lvl >= decision_level()) return;
  const size_t keep = level_start_[lvl];
  for (size_t i = trail_.size(); i-- > keep;) {
    Var v = trail_[i].var();
    value_[v] = -1;
    level_[v] = -1;
    pos_[v] = -1;
    reason_[v] = kDecisionReason;
  }
  trail_.resize(keep);
  qhead_ = std::min(qhead_, keep);
  ext_reasons_.resize(ext_start_[lvl]);
  level_start_.resize(lvl);
  ext_start_.resize(lvl);
  // A constraint added above `lvl` may already propagate here.
  for (auto& [added, c] : late_added_) {
    if (added <= lvl) continue;
    added = lvl;
    pending_.push_back(c);
  }
  std::erase_if(late_added_, [](const auto& e) { return e.first == 0; });
}

void PropEngine::enqueue_external(Lit l, NormConstraint reason) {
  ext_reasons_.push_back(std::move(reason));
  assign(l, kExternalBase - static_cast<int>(ext_reasons_.size() - 1));
}

const NormConstraint& PropEngine::reason_row(Var v) const {
  Reason r = reason_[v];
  assert(r != kDecisionReason);
  if (r >= 0) return store_[r].row;
  return ext_reasons_[kExternalBase - r];
}

bool PropEngine::reason_tainted(Var v) const {
  Reason r = reason_[v];
  if (r >= 0) return store_[r].tainted;
  return r != kDecisionReason;
}

Int128 PropEngine::slack(const NormConstraint& row) const {
  Int128 s = -Int128{row.degree};
  for (const WeightedLit& wl : row.lits)
    if (!is_false(wl.lit)) s += wl.coef;
  return s;
}

ConstrRef PropEngine::add_constraint(NormConstraint row, bool learned, bool tainted) {
  std::stable_sort(row.lits.begin(), row.lits.end(),
                   [](const WeightedLit& a, const WeightedLit& b) { return a.coef > b.coef; });
  StoredConstraint sc;
  sc.max_coef = row.lits.empty() ? 0 : row.lits.front().coef;
  sc.row = std::move(row);
  sc.watched.assign(sc.row.lits.size(), 0);
  sc.learned = learned;
  sc.tainted = tainted;
  sc.activity = learned ? constr_inc_ : 0.0;
  const ConstrRef c = static_cast<ConstrRef>(store_.size());
  store_.push_back(std::move(sc));
  if (learned) ++n_learned_;
  init_watches(c);
  pending_.push_back(c);
  if (decision_level() > 0) late_added_.push_back({decision_level(), c});
  return c;
}

void PropEngine::watch(ConstrRef c, int idx) {
  store_[c].watched[idx] = 1;
  watches_[store_[c].row.lits[idx].lit.code()].push_back(c);
}

void PropEngine::init_watches(ConstrRef c) {
  const auto& lits = store_[c].row.lits;
  const Int128 target = Int128{store_[c].row.degree} + store_[c].max_coef;
  // Non-false literals first, then false ones from the most recently
  // assigned, so that backjumping only ever adds watched non-false weight.
  std::vector<int> order;
  std::vector<int> falses;
  for (int i = 0; i < static_cast<int>(lits.size()); ++i)
    (is_false(lits[i].lit) ? falses : order).push_back(i);
  std::sort(falses.begin(), falses.end(),
            [&](int a, int b) { return pos_[lits[a].lit.var()] > pos_[lits[b].lit.var()]; });
  order.insert(order.end(), falses.begin(), falses.end());
  Int128 sum = 0;
  for (int i : order) {
    if (sum >= target) break;
    watch(c, i);
    sum += lits[i].coef;
  }
}

bool PropEngine::check(ConstrRef c) {
  const StoredConstraint& sc = store_[c];
  if (sc.deleted) return false;
  Int128 s = slack(sc.row);
  if (s < 0) return true;
  for (const WeightedLit& wl : sc.row.lits) {
    if (wl.coef <= s) break;
    if (lit_value(wl.lit) < 0) assign(wl.lit, c);
  }
  return false;
}

bool PropEngine::update(ConstrRef c, Lit falsified, bool& conflict) {
  StoredConstraint& sc = store_[c];
  const auto& lits = sc.row.lits;
  const Int128 target = Int128{sc.row.degree} + sc.max_coef;
  Int128 sum = 0;
  int self = -1;
  for (int i = 0; i < static_cast<int>(lits.size()); ++i) {
    if (!sc.watched[i]) continue;
    if (lits[i].lit == falsified) self = i;
    if (!is_false(lits[i].lit)) sum += lits[i].coef;
  }
  assert(self >= 0);
  for (int i = 0; i < static_cast<int>(lits.size()) && sum < target; ++i) {
    if (sc.watched[i] || is_false(lits[i].lit)) continue;
    watch(c, i);
    sum += lits[i].coef;
  }
  if (sum >= target) {
    sc.watched[self] = 0;
    return false;
  }
  // Every non-false literal is watched: sum - degree is the slack.
  const Int128 s = sum - sc.row.degree;
  if (s < 0) {
    conflict = true;
    return true;
  }
  for (const WeightedLit& wl : lits) {
    if (wl.coef <= s) break;
    if (lit_value(wl.lit) < 0) assign(wl.lit, c);
  }
  return true;
}

std::optional<ConstrRef> PropEngine::propagate() {
  for (;;) {
    while (!pending_.empty()) {
      ConstrRef c = pending_.back();
      pending_.pop_back();
      if (check(c)) return c;
    }
    if (qhead_ == trail_.size()) return std::nullopt;
    const Lit falsified = ~trail_[qhead_++];
    auto& ws = watches_[falsified.code()];
    size_t j = 0;
    std::optional<ConstrRef> conflict;
    for (size_t i = 0; i < ws.size(); ++i) {
      ConstrRef c = ws[i];
      if (store_[c].deleted) continue;
      if (conflict) {
        ws[j++] = c;
        continue;
      }
      bool is_conflict = false;
      if (update(c, falsified, is_conflict)) ws[j++] = c;
      if (is_conflict) conflict = c;
    }
    ws.resize(j);
    if (conflict) return conflict;
  }
}

void PropEngine::bump_constraint(ConstrRef c) {
  StoredConstraint& sc = store_[c];
  if (!sc.learned) return;
  sc.activity += constr_inc_;
  if (sc.activity > 1e100) {
    for (auto& other : store_) other.activity *= 1e-100;
    constr_inc_ *= 1e-100;
  }
}

void PropEngine::reduce_learned(int cap) {
  if (n_learned_ <= cap) return;
  std::vector<ConstrRef> candidates;
  for (ConstrRef c = 0; c < num_constraints(); ++c) {
    const StoredConstraint& sc = store_[c];
    if (!sc.learned || sc.deleted || sc.row.lits.size() <= 2) continue;
    bool locked = false;
    for (const WeightedLit& wl : sc.row.lits)
      if (reason_[wl.lit.var()] == c && value_[wl.lit.var()] >= 0) locked = true;
    if (!locked) candidates.push_back(c);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](ConstrRef a, ConstrRef b) { return store_[a].activity < store_[b].activity; });
  const size_t drop = std::min(candidates.size(), static_cast<size_t>(n_learned_ / 2));
  for (size_t k = 0; k < drop; ++k) {
    StoredConstraint& sc = store_[candidates[k]];
    sc.deleted = true;
    sc.row.lits.clear();
    sc.row.lits.shrink_to_fit();
    sc.watched.clear();
    --n_learned_;
  }
}

}  // namespace pbsolve
