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

#include "pbsolve/fjump.hpp"

#include <algorithm>
#include <cassert>

namespace pbsolve {

namespace {

Int128 viol(Int degree, Int128 act) { return act >= degree ? 0 : degree - act; }

// Uniform index in [0, n) by modular reduction of the engine output.
std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace

FjState::FjState(int n_vars, std::vector<NormConstraint> rows, std::vector<int> start)
    : rows_(std::move(rows)), occ_(n_vars), value_(std::move(start)), score_(n_vars, 0), good_pos_(n_vars, -1) {
  value_.resize(n_vars, 0);
  act_.assign(rows_.size(), 0);
  weight_.assign(rows_.size(), 1);
  violated_pos_.assign(rows_.size(), -1);
  for (int r = 0; r < n_rows(); ++r) {
    for (int i = 0; i < static_cast<int>(rows_[r].lits.size()); ++i) occ_[rows_[r].lits[i].lit.var()].push_back({r, i});
    act_[r] = recompute_activity(r);
    set_violated(r, violation(r) > 0);
    refresh_row(r, 1);
  }
}

Int128 FjState::violation(int r) const { return viol(rows_[r].degree, act_[r]); }

Int128 FjState::recompute_activity(int r) const {
  Int128 a = 0;
  for (const WeightedLit& wl : rows_[r].lits) a += Int128{wl.coef} * wl.lit.eval(value_[wl.lit.var()]);
  return a;
}

Int128 FjState::contribution(int r, Int128 act, Int coef, Lit lit) const {
  const bool on = lit.eval(value_[lit.var()]) == 1;
  const Int128 after = on ? act - coef : act + coef;
  return Int128{weight_[r]} * (viol(rows_[r].degree, after) - viol(rows_[r].degree, act));
}

Int128 FjState::score_from_scratch(Var v) const {
  Int128 s = 0;
  for (int r = 0; r < n_rows(); ++r) {
    Int128 act = recompute_activity(r);
    for (const WeightedLit& wl : rows_[r].lits)
      if (wl.lit.var() == v) s += contribution(r, act, wl.coef, wl.lit);
  }
  return s;
}

void FjState::refresh_row(int r, int sign) {
  for (const WeightedLit& wl : rows_[r].lits) {
    Var v = wl.lit.var();
    score_[v] += sign * contribution(r, act_[r], wl.coef, wl.lit);
    set_good(v);
  }
}

void FjState::set_violated(int r, bool on) {
  if (on == (violated_pos_[r] >= 0)) return;
  if (on) {
    violated_pos_[r] = static_cast<int>(violated_.size());
    violated_.push_back(r);
  } else {
    int back = violated_.back();
    violated_[violated_pos_[r]] = back;
    violated_pos_[back] = violated_pos_[r];
    violated_.pop_back();
    violated_pos_[r] = -1;
  }
}

void FjState::set_good(Var v) {
  bool on = score_[v] < 0;
  if (on == (good_pos_[v] >= 0)) return;
  if (on) {
    good_pos_[v] = static_cast<int>(good_.size());
    good_.push_back(v);
  } else {
    Var back = good_.back();
    good_[good_pos_[v]] = back;
    good_pos_[back] = good_pos_[v];
    good_.pop_back();
    good_pos_[v] = -1;
  }
}

void FjState::flip(Var v) {
  for (auto [r, i] : occ_[v]) refresh_row(r, -1);
  for (auto [r, i] : occ_[v]) {
    const WeightedLit& wl = rows_[r].lits[i];
    act_[r] += wl.lit.eval(value_[v]) == 1 ? -Int128{wl.coef} : Int128{wl.coef};
  }
  value_[v] ^= 1;
  for (auto [r, i] : occ_[v]) {
    refresh_row(r, 1);
    set_violated(r, violation(r) > 0);
    assert(act_[r] == recompute_activity(r));
  }
}

void FjState::bump_weight(int r) {
  refresh_row(r, -1);
  ++weight_[r];
  refresh_row(r, 1);
}

int FjState::add_row(NormConstraint row) {
  const int r = n_rows();
  rows_.push_back(std::move(row));
  act_.push_back(0);
  weight_.push_back(1);
  violated_pos_.push_back(-1);
  for (int i = 0; i < static_cast<int>(rows_[r].lits.size()); ++i) occ_[rows_[r].lits[i].lit.var()].push_back({r, i});
  act_[r] = recompute_activity(r);
  set_violated(r, violation(r) > 0);
  refresh_row(r, 1);
  return r;
}

void FjState::replace_row(int r, NormConstraint row) {
  assert(row.lits.size() == rows_[r].lits.size());
  refresh_row(r, -1);
  rows_[r] = std::move(row);
  act_[r] = recompute_activity(r);
  set_violated(r, violation(r) > 0);
  refresh_row(r, 1);
}

std::optional<NormConstraint> objective_bound_row(const EngineProblem& p, Int128 bound, bool& impossible) {
  // objective . x + offset <= bound  <=>  sum(-c_j x_j) >= offset - bound
  impossible = false;
  NormConstraint row;
  Int128 degree = Int128{p.objective_offset} - bound;
  Int128 total = 0;
  std::vector<std::pair<Int128, Lit>> lits;
  for (Var j = 0; j < p.n_total; ++j) {
    Int c = p.objective[j];
    if (c == 0) continue;
    if (c < 0) {
      lits.push_back({-Int128{c}, Lit::pos(j)});
    } else {
      lits.push_back({c, Lit::neg(j)});
      degree += c;
    }
    total += lits.back().first;
  }
  if (degree <= 0) return std::nullopt;
  if (degree > total || degree > kMaxCoefficient) {
    impossible = degree > total;
    if (impossible) return std::nullopt;
    degree = kMaxCoefficient;
  }
  row.degree = static_cast<Int>(degree);
  for (const auto& [c, l] : lits) row.lits.push_back({static_cast<Int>(std::min(c, degree)), l});
  return row;
}

std::vector<NormConstraint> fj_rows(const EngineProblem& p) {
  std::vector<NormConstraint> rows = p.hard;
  for (const IndicatorRow& ind : p.indicators)
    for (const NormConstraint& r : ind.rows) rows.push_back(indicator_as_row(ind.y, r));
  if (p.objective_cap) {
    bool impossible = false;
    if (auto r = objective_bound_row(p, *p.objective_cap, impossible)) rows.push_back(std::move(*r));
    if (impossible) rows.push_back(NormConstraint{{}, 1});
  }
  return rows;
}

FjResult fj_run(const EngineProblem& p, const FjConfig& config) {
  FjResult result;
  if (p.trivially_infeasible) return result;
  std::vector<NormConstraint> rows = fj_rows(p);
  for (const NormConstraint& r : rows)
    if (r.infeasible()) return result;
  FjState st(p.n_total, std::move(rows), config.start);
  std::mt19937_64 rng(config.seed);

  int bound_row = -1;
  auto tighten = [&](Int128 best) {
    bool impossible = false;
    auto row = objective_bound_row(p, best - 1, impossible);
    if (impossible) return false;
    if (!row) return true;
    if (bound_row < 0) {
      bound_row = st.add_row(std::move(*row));
    } else {
      st.replace_row(bound_row, std::move(*row));
    }
    return true;
  };
  if (config.incumbent && p.has_objective && !tighten(*config.incumbent)) return result;

  size_t best_violated = SIZE_MAX;
  std::uint64_t stall = 0;
  for (; result.flips < config.max_flips; ++result.flips) {
    if ((result.flips & 255) == 0) {
      if (config.stop && config.stop->load(std::memory_order_relaxed)) break;
      if (std::chrono::steady_clock::now() >= config.deadline) break;
    }
    if (st.violated_rows().empty()) {
      const std::vector<int>& x = st.values();
      if (!p.feasible(x)) break;  // unreachable: every row is satisfied
      Int128 obj = p.objective_value(x);
      if (!result.solution || obj < result.objective) {
        result.solution = x;
        result.objective = obj;
      }
      if (!p.has_objective || !tighten(obj)) break;
      best_violated = SIZE_MAX;
      stall = 0;
      continue;
    }
    Var chosen = -1;
    const auto& good = st.improving_vars();
    if (!good.empty()) {
      Int128 best = 0;
      std::uint64_t ties = 0;
      for (Var v : good) {
        Int128 s = st.score(v);
        if (chosen < 0 || s < best) {
          chosen = v;
          best = s;
          ties = 1;
        } else if (s == best && pick(rng, ++ties) == 0) {
          chosen = v;
        }
      }
    } else {
      std::vector<int> violated = st.violated_rows();
      for (int r : violated) st.bump_weight(r);
      const NormConstraint& row = st.row(violated[pick(rng, violated.size())]);
      std::vector<Var> candidates;
      for (const WeightedLit& wl : row.lits)
        if (wl.lit.eval(st.value(wl.lit.var())) == 0) candidates.push_back(wl.lit.var());
      if (candidates.empty()) break;
      chosen = candidates[pick(rng, candidates.size())];
    }
    st.flip(chosen);
    if (config.record_trace) result.trace.push_back(chosen);
    if (st.violated_rows().size() < best_violated) {
      best_violated = st.violated_rows().size();
      stall = 0;
    } else if (++stall > config.stall_limit) {
      break;
    }
  }
  return result;
}

}  // namespace pbsolve
