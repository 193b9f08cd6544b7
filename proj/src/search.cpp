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

#include "pbsolve/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <random>
#include <thread>

#include "pbsolve/conflict.hpp"
#include "pbsolve/fjump.hpp"
#include "pbsolve/flower.hpp"
#include "pbsolve/lp.hpp"
#include "pbsolve/propagation.hpp"
#include "pbsolve/rlt.hpp"
#include "pbsolve/symmetry.hpp"

namespace pbsolve {

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kDefault:
      return "default";
    case Mode::kAggressiveHeur:
      return "aggressive-heur";
    case Mode::kSatLike:
      return "sat-like";
  }
  return "default";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : {Mode::kDefault, Mode::kAggressiveHeur, Mode::kSatLike})
    if (mode_name(m) == text) return m;
  return std::nullopt;
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kFjump:
      return "fjump";
    case Provenance::kLpRounding:
      return "lp-rounding";
    case Provenance::kNodeIntegral:
      return "node-integral";
  }
  return "node-integral";
}

bool IncumbentMailbox::offer(const Incumbent& inc) {
  std::lock_guard lock(mu_);
  if (best_ && best_->objective <= inc.objective) return false;
  best_ = inc;
  return true;
}

std::optional<Incumbent> IncumbentMailbox::best() const {
  std::lock_guard lock(mu_);
  return best_;
}

std::optional<Int128> IncumbentMailbox::best_objective() const {
  std::lock_guard lock(mu_);
  if (!best_) return std::nullopt;
  return best_->objective;
}

std::optional<Incumbent> check_solution(const Instance& inst, std::span<const double> candidate,
                                        Provenance provenance, double eps) {
  if (static_cast<int>(candidate.size()) < inst.n_vars) return std::nullopt;
  Incumbent inc;
  inc.provenance = provenance;
  inc.values.resize(inst.n_vars);
  for (int i = 0; i < inst.n_vars; ++i) {
    double v = candidate[i];
    if (!(v >= -eps && v <= 1.0 + eps)) return std::nullopt;
    inc.values[i] = v >= 0.5 ? 1 : 0;
  }
  auto eval = [&](const std::vector<Term>& terms) {
    Int128 s = 0;
    for (const Term& t : terms) {
      bool on = true;
      for (int v : t.monomial) on = on && inc.values[v - 1] == 1;
      if (on) s += t.coef;
    }
    return s;
  };
  Int128 cost = 0;
  for (const PbConstraint& c : inst.constraints) {
    Int128 act = eval(c.terms);
    bool ok = c.relation == Relation::kEq ? act == c.rhs : act >= c.rhs;
    if (ok) continue;
    if (!c.weight) return std::nullopt;
    cost += *c.weight;
  }
  if (inst.is_wbo && inst.top_cost && cost >= *inst.top_cost) return std::nullopt;
  if (inst.is_wbo) {
    inc.objective = cost;
  } else if (inst.objective) {
    inc.objective = eval(*inst.objective) + inst.objective_constant;
  }
  return inc;
}

std::optional<NormConstraint> indicator_lp_row(const NormConstraint& row, Var y, std::span<const int> values,
                                               double mcap, bool& skipped) {
  skipped = false;
  if (values[y] == 0) return std::nullopt;
  if (values[y] == 1) return row;
  Int128 fixed_true = 0;
  for (const WeightedLit& wl : row.lits) {
    int v = values[wl.lit.var()];
    if (v >= 0 && wl.lit.eval(v) == 1) fixed_true += wl.coef;
  }
  Int128 m = Int128{row.degree} - fixed_true;
  if (m <= 0) return std::nullopt;
  if (static_cast<double>(m) > mcap) {
    skipped = true;
    return std::nullopt;
  }
  NormConstraint out = row;
  out.lits.push_back({static_cast<Int>(m), Lit::neg(y)});
  return out;
}

bool restart_due(int restarts_done, int n_vars, int fixed_now, int fixed_at_last, bool indicators_all_fixed,
                 bool indicators_were_all_fixed) {
  if (restarts_done >= 3) return false;
  if (indicators_all_fixed && !indicators_were_all_fixed) return true;
  return fixed_now > fixed_at_last && 5 * (fixed_now - fixed_at_last) >= n_vars;
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Conflict {
  NormConstraint row;
  bool tainted = false;
};

// Max-heap of variables by activity, ties to the lower index.
class VarOrder {
 public:
  void init(int n) {
    act_.assign(n, 0.0);
    pos_.assign(n, -1);
    heap_.clear();
    for (Var v = 0; v < n; ++v) insert(v);
  }
  void insert(Var v) {
    if (pos_[v] >= 0) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(pos_[v]);
  }
  void bump(Var v) {
    act_[v] += inc_;
    if (act_[v] > 1e100) {
      for (double& a : act_) a *= 1e-100;
      inc_ *= 1e-100;
    }
    if (pos_[v] >= 0) up(pos_[v]);
  }
  void decay() { inc_ /= 0.95; }
  bool empty() const { return heap_.empty(); }
  Var top() const { return heap_[0]; }
  void pop() {
    Var v = heap_[0];
    heap_[0] = heap_.back();
    pos_[heap_[0]] = 0;
    heap_.pop_back();
    pos_[v] = -1;
    if (!heap_.empty()) down(0);
  }

 private:
  bool before(Var a, Var b) const { return act_[a] > act_[b] || (act_[a] == act_[b] && a < b); }
  void up(int i) {
    Var v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    pos_[v] = i;
  }
  void down(int i) {
    Var v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    while (true) {
      int c = 2 * i + 1;
      if (c >= n) break;
      if (c + 1 < n && before(heap_[c + 1], heap_[c])) ++c;
      if (!before(heap_[c], v)) break;
      heap_[i] = heap_[c];
      pos_[heap_[i]] = i;
      i = c;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  std::vector<double> act_;
  std::vector<int> pos_;
  std::vector<Var> heap_;
  double inc_ = 1.0;
};

struct Node {
  std::vector<Lit> decisions;
  double bound = -kInf;  // objective including offset
  LpBasis basis;
  int depth = 0;
  std::uint64_t id = 0;
};

struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

// Smallest integer objective value compatible with an LP bound.
std::optional<Int128> integer_bound(double bound) {
  if (!std::isfinite(bound) || std::abs(bound) > 1e15) return std::nullopt;
  return static_cast<Int128>(std::ceil(bound - 1e-6 - 1e-9 * std::abs(bound)));
}

int luby(int i) {
  // 1 1 2 1 1 2 4 ...
  int size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i %= size;
  }
  return 1 << seq;
}

class Solver {
 public:
  Solver(const EngineProblem& p, const SolverConfig& cfg) : p_(p), cfg_(cfg), rng_(cfg.seed) {}

  SolveResult run();

 private:
  // Setup.
  bool build_engine(const std::vector<std::pair<Lit, bool>>& units, const std::vector<StoredConstraint>& keep);
  void build_lp();
  bool root_symmetry();
  void run_fjump();

  // Propagation and conflicts.
  std::optional<Conflict> propagate_all();
  bool resolve_conflict(const Conflict& c);
  void backjump_to(int level);
  std::vector<int> values() const;

  // Solutions.
  bool offer(std::span<const int> vals, Provenance prov);
  void install_cutoff();
  void poll_mailbox();
  bool limits_hit();

  // Search loops.
  void run_cdcl();
  void run_bnb();
  std::vector<Node> process(Node& node);
  bool reach(const std::vector<Lit>& decisions);
  void node_infeasible(const Node& node);
  bool pruned(double bound) const;
  Var pick_activity();
  bool maybe_restart();
  void restart();
  void separate(Node& node, LpSolution& sol);

  const EngineProblem& p_;
  SolverConfig cfg_;
  std::mt19937_64 rng_;
  Clock::time_point deadline_ = Clock::time_point::max();
  SolveResult res_;
  bool optimize_ = false;
  bool exhausted_ = false;  // search space proven empty (or optimum proven)
  bool found_ = false;      // decision instance solved
  std::optional<Int128> best_;

  std::unique_ptr<PropEngine> eng_;
  VarOrder order_;
  std::vector<int> phase_;
  std::vector<char> flipped_;  // per level, chronological backtracking
  int learned_cap_ = 4000;

  std::vector<Generator> gens_;
  bool sym_active_ = false;

  LpModel lp_;
  RowKey next_key_ = 1;
  Hypergraph graph_;
  ProductTable products_;
  std::vector<char> ind_flagged_;

  std::vector<Lit> path_;
  std::vector<int> path_level_;
  std::priority_queue<Node, std::vector<Node>, NodeAfter> queue_;
  std::uint64_t next_id_ = 0;
  double global_bound_ = -kInf;

  int fixed_at_restart_ = 0;
  bool ind_fixed_at_restart_ = false;
  bool restart_pending_ = false;
};

std::vector<int> Solver::values() const {
  std::vector<int> v(p_.n_total);
  for (Var j = 0; j < p_.n_total; ++j) v[j] = eng_->value(j);
  return v;
}

bool Solver::limits_hit() {
  if (cfg_.stop && cfg_.stop->load(std::memory_order_relaxed)) return true;
  if (cfg_.node_limit && res_.stats.nodes >= cfg_.node_limit) return true;
  return Clock::now() >= deadline_;
}

bool Solver::build_engine(const std::vector<std::pair<Lit, bool>>& units, const std::vector<StoredConstraint>& keep) {
  eng_ = std::make_unique<PropEngine>(p_.n_total);
  path_.clear();
  path_level_.clear();
  flipped_.assign(1, 0);
  order_.init(p_.n_total);
  for (const NormConstraint& r : p_.hard) eng_->add_constraint(r, false);
  for (const IndicatorRow& ind : p_.indicators)
    for (const NormConstraint& r : ind.rows) eng_->add_constraint(indicator_as_row(ind.y, r), false);
  if (p_.objective_cap) {
    bool impossible = false;
    if (auto r = objective_bound_row(p_, *p_.objective_cap, impossible)) eng_->add_constraint(std::move(*r), false);
    if (impossible) return false;
  }
  for (auto [lit, tainted] : units) eng_->add_constraint(NormConstraint{{{1, lit}}, 1}, false, tainted);
  for (const StoredConstraint& c : keep) eng_->add_constraint(c.row, true, c.tainted);
  if (best_) {
    bool impossible = false;
    auto r = objective_bound_row(p_, *best_ - 1, impossible);
    if (impossible) return false;
    if (r) eng_->add_constraint(std::move(*r), false);
  }
  return true;
}

void Solver::backjump_to(int level) {
  if (level >= eng_->decision_level()) return;
  const auto& trail = eng_->trail();
  for (int i = eng_->level_end(level); i < static_cast<int>(trail.size()); ++i) order_.insert(trail[i].var());
  eng_->backjump(level);
  flipped_.resize(level + 1);
  while (!path_level_.empty() && path_level_.back() > level) {
    path_level_.pop_back();
    path_.pop_back();
  }
}

std::optional<Conflict> Solver::propagate_all() {
  while (true) {
    if (auto c = eng_->propagate()) {
      const StoredConstraint& sc = eng_->constraint(*c);
      return Conflict{sc.row, sc.tainted};
    }
    if (!sym_active_) return std::nullopt;
    bool changed = false;
    std::vector<int> vals = values();
    for (const Generator& g : gens_) {
      LexOutcome out = lex_leader_propagate(g, vals);
      for (LexFixing& f : out.fixings) {
        int lv = eng_->lit_value(f.lit);
        if (lv == 1) continue;
        if (lv == 0) return Conflict{std::move(f.reason), true};
        vals[f.lit.var()] = f.lit.eval(1);
        eng_->enqueue_external(f.lit, std::move(f.reason));
        ++res_.stats.lex_fixings;
        changed = true;
      }
      if (out.conflict) return Conflict{std::move(*out.conflict), true};
      if (changed) break;  // let the engine propagate first
    }
    if (!changed) return std::nullopt;
  }
}

bool Solver::resolve_conflict(const Conflict& c) {
  ++res_.stats.conflicts;
  if (eng_->decision_level() == 0) return false;
  AnalysisResult a = analyze(*eng_, c.row, c.tainted);
  if (a.unsat) return false;
  if (a.clause_fallback) ++res_.stats.clause_fallbacks;
  for (Var v : a.vars_seen) order_.bump(v);
  order_.decay();
  for (ConstrRef r : a.reasons_used)
    if (eng_->constraint(r).learned) eng_->bump_constraint(r);
  eng_->decay_constraint_activity();
  backjump_to(a.backjump_level);
  if (cfg_.on_learned) cfg_.on_learned(a.learned, a.tainted);
  eng_->add_constraint(std::move(a.learned), true, a.tainted);
  ++res_.stats.learned;
  if (eng_->num_learned() > learned_cap_) {
    eng_->reduce_learned(learned_cap_);
    learned_cap_ += learned_cap_ / 10;
  }
  return true;
}

bool Solver::offer(std::span<const int> vals, Provenance prov) {
  std::optional<Incumbent> inc;
  if (p_.original) {
    std::vector<double> cand(vals.begin(), vals.begin() + p_.n_orig);
    inc = check_solution(*p_.original, cand, prov);
  } else {
    std::vector<int> full(vals.begin(), vals.end());
    complete_assignment(p_, full);
    if (p_.feasible(full)) inc = Incumbent{std::vector<int>(full.begin(), full.begin() + p_.n_orig),
                                           p_.objective_value(full), prov};
  }
  if (!inc) {
    ++res_.stats.rejected_candidates;
    return false;
  }
  if (best_ && inc->objective >= *best_) return false;
  best_ = inc->objective;
  if (cfg_.mailbox) cfg_.mailbox->offer(*inc);
  res_.incumbent = std::move(inc);
  if (static_cast<int>(vals.size()) == p_.n_total) phase_.assign(vals.begin(), vals.end());
  install_cutoff();
  return true;
}

void Solver::install_cutoff() {
  if (!optimize_) {
    found_ = true;
    return;
  }
  bool impossible = false;
  auto row = objective_bound_row(p_, *best_ - 1, impossible);
  if (impossible) {
    exhausted_ = true;
    return;
  }
  if (row) eng_->add_constraint(std::move(*row), false);
}

void Solver::poll_mailbox() {
  if (!cfg_.mailbox || !optimize_) return;
  auto theirs = cfg_.mailbox->best_objective();
  if (!theirs || (best_ && *best_ <= *theirs)) return;
  auto inc = cfg_.mailbox->best();
  best_ = inc->objective;
  res_.incumbent = std::move(inc);
  install_cutoff();
}

bool Solver::root_symmetry() {
  if (!cfg_.symmetry) return true;
  gens_ = detect_symmetries(p_);
  res_.stats.generators = static_cast<int>(gens_.size());
  sym_active_ = !gens_.empty() && gens_.size() <= 10;
  if (!sym_active_) {
    gens_.clear();
    return true;
  }
  // Root fixings implied without symmetry reasoning spread over orbits.
  std::vector<Var> orbit = orbits(p_.n_total, gens_);
  while (true) {
    if (propagate_all()) return false;
    std::vector<int> vals = values();
    std::vector<char> usable(p_.n_total, 0);
    for (Var v = 0; v < p_.n_total; ++v) usable[v] = vals[v] >= 0 && !eng_->reason_tainted(v);
    std::vector<Var> fix = orbital_zero_fixings(orbit, vals, usable);
    if (fix.empty()) return true;
    for (Var v : fix) eng_->add_constraint(NormConstraint{{{1, Lit::neg(v)}}, 1}, false);
    res_.stats.orbital_fixings += fix.size();
  }
}

void Solver::run_fjump() {
  if (!cfg_.fjump || limits_hit()) return;
  FjConfig fc;
  fc.seed = cfg_.seed;
  double budget = cfg_.mode == Mode::kAggressiveHeur ? 10.0 : 2.0;
  if (cfg_.time_limit > 0) budget = std::min(budget, cfg_.time_limit * (cfg_.mode == Mode::kAggressiveHeur ? 0.3 : 0.1));
  fc.deadline = std::min(deadline_, Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                                      std::chrono::duration<double>(budget)));
  fc.stop = cfg_.stop;
  fc.incumbent = best_;
  // Start from the root fixings.
  fc.start.assign(p_.n_total, 0);
  for (Var v = 0; v < p_.n_total; ++v)
    if (eng_->value(v) == 1) fc.start[v] = 1;
  FjResult r = fj_run(p_, fc);
  res_.stats.fj_flips += r.flips;
  if (r.solution) offer(*r.solution, Provenance::kFjump);
}

void Solver::build_lp() {
  lp_ = LpModel();
  next_key_ = 1;
  for (Var j = 0; j < p_.n_total; ++j) lp_.add_column(0.0, 1.0, static_cast<double>(p_.objective[j]));
  for (const NormConstraint& r : p_.hard) lp_.add_row(cut_from_row(r, CutKind::kModel), next_key_++);
  if (p_.objective_cap) {
    bool impossible = false;
    if (auto r = objective_bound_row(p_, *p_.objective_cap, impossible))
      lp_.add_row(cut_from_row(*r, CutKind::kModel), next_key_++);
  }
  std::vector<int> vals = values();
  ind_flagged_.assign(p_.indicators.size(), 0);
  res_.stats.indicator_rows = 0;
  res_.stats.indicator_skipped = 0;
  for (size_t i = 0; i < p_.indicators.size(); ++i) {
    const IndicatorRow& ind = p_.indicators[i];
    for (const NormConstraint& r : ind.rows) {
      bool skipped = false;
      auto row = indicator_lp_row(r, ind.y, vals, cfg_.mcap, skipped);
      if (skipped) {
        ind_flagged_[i] = 1;
        ++res_.stats.indicator_skipped;
      }
      if (row && lp_.add_row(cut_from_row(*row, CutKind::kModel), next_key_++)) ++res_.stats.indicator_rows;
    }
  }
}

SolveResult Solver::run() {
  if (cfg_.time_limit > 0)
    deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg_.time_limit));
  optimize_ = p_.has_objective;
  phase_.assign(p_.n_total, 0);
  for (Var v = 0; v < p_.n_total; ++v) phase_[v] = p_.objective[v] < 0 ? 1 : 0;

  bool ok = !p_.trivially_infeasible && build_engine({}, {});
  if (ok) ok = !propagate_all();
  if (ok) ok = root_symmetry();
  if (!ok) {
    exhausted_ = true;
  } else {
    graph_ = build_hypergraph(p_);
    products_ = build_product_table(p_);
    run_fjump();
    if (!exhausted_ && !found_) {
      if (!optimize_ || cfg_.mode == Mode::kSatLike) {
        run_cdcl();
      } else {
        run_bnb();
      }
    }
  }

  SolveResult out = std::move(res_);
  if (exhausted_) {
    if (out.incumbent) {
      out.status = optimize_ ? SolveStatus::kOptimum : SolveStatus::kSatisfiable;
      if (optimize_) out.dual_bound = out.incumbent->objective;
    } else {
      out.status = SolveStatus::kUnsatisfiable;
    }
  } else if (out.incumbent) {
    out.status = SolveStatus::kSatisfiable;
    if (optimize_) {
      if (auto b = integer_bound(global_bound_)) out.dual_bound = std::min(*b, out.incumbent->objective);
    }
  } else {
    out.status = SolveStatus::kUnknown;
    if (auto b = integer_bound(global_bound_)) out.dual_bound = *b;
  }
  return out;
}

// Conflict-driven search: decisions follow activity, conflicts are learned
// (or undone chronologically when conflict analysis is off).
void Solver::run_cdcl() {
  // Root LP: an infeasible relaxation settles the instance at once.
  build_lp();
  if (lp_.trivially_infeasible()) {
    exhausted_ = true;
    return;
  }
  {
    std::vector<int> vals = values();
    for (Var j = 0; j < p_.n_total; ++j)
      lp_.set_bounds(j, vals[j] == 1 ? 1.0 : 0.0, vals[j] == 0 ? 0.0 : 1.0);
    LpSolution sol = lp_solve(lp_, 20000);
    res_.stats.lp_iterations += sol.iterations;
    if (sol.status == LpStatus::kInfeasible) {
      exhausted_ = true;
      return;
    }
    if (sol.status == LpStatus::kOptimal) global_bound_ = sol.objective + static_cast<double>(p_.objective_offset);
  }
  int restart_round = 0;
  std::uint64_t conflicts_at_restart = 0;
  while (!exhausted_ && !found_) {
    if ((res_.stats.nodes & 63) == 0 && limits_hit()) return;
    poll_mailbox();
    if (exhausted_) return;
    if (auto c = propagate_all()) {
      if (eng_->decision_level() == 0) {
        ++res_.stats.conflicts;
        exhausted_ = true;
        return;
      }
      if (cfg_.conflict_pb) {
        if (!resolve_conflict(*c)) {
          exhausted_ = true;
          return;
        }
      } else {
        ++res_.stats.conflicts;
        int level = eng_->decision_level();
        while (level > 0 && flipped_[level]) --level;
        if (level == 0) {
          exhausted_ = true;
          return;
        }
        Lit d = eng_->trail()[eng_->level_end(level - 1)];
        backjump_to(level - 1);
        eng_->decide(~d);
        flipped_.push_back(1);
      }
      if ((res_.stats.conflicts & 255) == 0 && limits_hit()) return;
      continue;
    }
    if (cfg_.restarts && cfg_.conflict_pb && eng_->decision_level() > 0 &&
        res_.stats.conflicts - conflicts_at_restart >= 100u * static_cast<unsigned>(luby(restart_round))) {
      ++restart_round;
      conflicts_at_restart = res_.stats.conflicts;
      backjump_to(0);
      continue;
    }
    if (eng_->decision_level() == 0 && maybe_restart()) {
      if (exhausted_) return;
      continue;
    }
    Var v = pick_activity();
    if (v < 0) {
      std::vector<int> vals = values();
      bool accepted = offer(vals, Provenance::kNodeIntegral);
      if (found_ || exhausted_) return;
      if (!accepted) {
        // Engine and exact check disagree; block this point.
        if (eng_->decision_level() == 0) {
          exhausted_ = true;
          return;
        }
        NormConstraint block;
        block.degree = 1;
        for (int l = 1; l <= eng_->decision_level(); ++l)
          block.lits.push_back({1, ~eng_->trail()[eng_->level_end(l - 1)]});
        eng_->add_constraint(std::move(block), true, sym_active_);
      }
      continue;
    }
    ++res_.stats.nodes;
    eng_->decide(Lit(v, phase_[v] == 0));
    flipped_.push_back(0);
  }
}

Var Solver::pick_activity() {
  while (!order_.empty()) {
    Var v = order_.top();
    if (eng_->value(v) < 0) return v;
    order_.pop();
  }
  return -1;
}

bool Solver::maybe_restart() {
  if (!cfg_.restarts) return false;
  const int fixed = eng_->decision_level() == 0 ? eng_->num_assigned() : eng_->level_end(0);
  bool all_ind = !p_.indicators.empty();
  for (const IndicatorRow& ind : p_.indicators)
    all_ind = all_ind && eng_->value(ind.y) >= 0 && eng_->level(ind.y) == 0;
  if (!restart_due(res_.stats.restarts, p_.n_total, fixed, fixed_at_restart_, all_ind, ind_fixed_at_restart_))
    return false;
  fixed_at_restart_ = fixed;
  ind_fixed_at_restart_ = all_ind;
  restart();
  return true;
}

// Rebuilds engine and LP from the root fixings, short learned constraints
// and the incumbent; the tree is dropped.
void Solver::restart() {
  ++res_.stats.restarts;
  backjump_to(0);
  if (propagate_all()) {
    exhausted_ = true;
    return;
  }
  std::vector<std::pair<Lit, bool>> units;
  for (Lit l : eng_->trail()) units.push_back({l, eng_->reason_tainted(l.var())});
  std::vector<StoredConstraint> keep;
  for (int c = 0; c < eng_->num_constraints(); ++c) {
    const StoredConstraint& sc = eng_->constraint(c);
    if (sc.learned && !sc.deleted && sc.row.lits.size() <= 2) keep.push_back(sc);
  }
  if (!build_engine(units, keep) || propagate_all() || !root_symmetry()) {
    exhausted_ = true;
    return;
  }
  build_lp();
  queue_ = {};
  Node root;
  root.id = next_id_++;
  queue_.push(std::move(root));
}

bool Solver::reach(const std::vector<Lit>& decisions) {
  size_t k = 0;
  while (k < path_.size() && k < decisions.size() && path_[k] == decisions[k]) ++k;
  backjump_to(k == 0 ? 0 : path_level_[k - 1]);
  path_.resize(std::min(path_.size(), k));
  path_level_.resize(path_.size());
  auto conflict = [&](const Conflict& c) {
    if (eng_->decision_level() == 0) {
      ++res_.stats.conflicts;
      exhausted_ = true;
      return false;
    }
    if (cfg_.conflict_pb) {
      if (!resolve_conflict(c)) exhausted_ = true;
    } else {
      ++res_.stats.conflicts;
      backjump_to(eng_->decision_level() - 1);
    }
    return false;
  };
  if (auto c = propagate_all()) return conflict(*c);
  for (size_t i = path_.size(); i < decisions.size(); ++i) {
    Lit d = decisions[i];
    int lv = eng_->lit_value(d);
    if (lv == 0) return false;
    if (lv < 0) eng_->decide(d);
    path_.push_back(d);
    path_level_.push_back(eng_->decision_level());
    if (auto c = propagate_all()) return conflict(*c);
  }
  return true;
}

bool Solver::pruned(double bound) const {
  if (!best_) return false;
  auto b = integer_bound(bound);
  return b && *b >= *best_;
}

// The node's region holds no improving solution: learn the negated
// decisions so other nodes benefit.
void Solver::node_infeasible(const Node& node) {
  if (node.decisions.empty()) {
    exhausted_ = true;
    return;
  }
  ++res_.stats.conflicts;
  if (!cfg_.conflict_pb) return;
  NormConstraint clause;
  clause.degree = 1;
  for (Lit d : node.decisions) clause.lits.push_back({1, ~d});
  std::sort(clause.lits.begin(), clause.lits.end(),
            [](const WeightedLit& a, const WeightedLit& b) { return a.lit < b.lit; });
  clause.lits.erase(std::unique(clause.lits.begin(), clause.lits.end()), clause.lits.end());
  eng_->add_constraint(std::move(clause), true, sym_active_);
  ++res_.stats.learned;
}

void Solver::separate(Node& node, LpSolution& sol) {
  if (!cfg_.flower && !cfg_.rlt) return;
  const int rounds = node.depth == 0 ? 10 : 2;
  for (int round = 0; round < rounds && sol.status == LpStatus::kOptimal; ++round) {
    std::vector<Cut> cuts;
    if (cfg_.flower && graph_.num_edges() > 0) {
      for (Cut& c : separate_flower(graph_, sol.x, 1, 50)) cuts.push_back(std::move(c));
      for (Cut& c : separate_flower(graph_, sol.x, 2, 50)) cuts.push_back(std::move(c));
    }
    if (cfg_.rlt && !products_.empty())
      for (Cut& c : separate_rlt_round(p_, products_, sol.x)) cuts.push_back(std::move(c));
    if (cuts.empty()) return;
    int added = 0;
    for (const Cut& c : cuts)
      if (lp_.add_row(c, next_key_++)) {
        ++added;
        ++res_.stats.cuts[static_cast<int>(c.kind)];
      }
    if (added == 0) return;
    lp_.warm_start = sol.basis;
    LpSolution next = lp_solve(lp_, 20000);
    res_.stats.lp_iterations += next.iterations;
    if (next.status == LpStatus::kIterationLimit) return;
    sol = std::move(next);
  }
}

std::vector<Node> Solver::process(Node& node) {
  ++res_.stats.nodes;
  if (!reach(node.decisions) || exhausted_) return {};
  std::vector<int> vals = values();
  if (std::all_of(vals.begin(), vals.end(), [](int v) { return v >= 0; })) {
    offer(vals, Provenance::kNodeIntegral);
    return {};
  }
  for (Var j = 0; j < p_.n_total; ++j) lp_.set_bounds(j, vals[j] == 1 ? 1.0 : 0.0, vals[j] == 0 ? 0.0 : 1.0);
  lp_.warm_start = node.basis;
  LpSolution sol = lp_solve(lp_, 20000);
  res_.stats.lp_iterations += sol.iterations;
  if (sol.status == LpStatus::kInfeasible) {
    node_infeasible(node);
    return {};
  }
  double bound = node.bound;
  if (sol.status == LpStatus::kOptimal) {
    bound = std::max(bound, sol.objective + static_cast<double>(p_.objective_offset));
    if (pruned(bound)) {
      node_infeasible(node);
      return {};
    }
    if (node.depth % 10 == 0) {
      separate(node, sol);
      if (sol.status == LpStatus::kInfeasible) {
        node_infeasible(node);
        return {};
      }
      bound = std::max(bound, sol.objective + static_cast<double>(p_.objective_offset));
      if (pruned(bound)) {
        node_infeasible(node);
        return {};
      }
    }
    if (node.depth == 0) global_bound_ = std::max(global_bound_, bound);
    bool integral = true;
    for (Var j = 0; j < p_.n_total && integral; ++j)
      integral = std::min(sol.x[j], 1.0 - sol.x[j]) <= cfg_.ftol;
    if (integral || cfg_.mode == Mode::kAggressiveHeur) {
      std::vector<int> rounded(p_.n_total);
      for (Var j = 0; j < p_.n_total; ++j) rounded[j] = sol.x[j] >= 0.5 ? 1 : 0;
      offer(rounded, integral ? Provenance::kNodeIntegral : Provenance::kLpRounding);
      if (exhausted_) return {};
      if (pruned(bound)) {
        node_infeasible(node);
        return {};
      }
    }
  }

  // Branching: indicator with a violated row, then most fractional, then
  // activity.
  Var branch = -1;
  if (sol.status == LpStatus::kOptimal) {
    for (const IndicatorRow& ind : p_.indicators) {
      if (vals[ind.y] >= 0) continue;
      for (const NormConstraint& r : ind.rows) {
        double act = 0.0;
        for (const WeightedLit& wl : r.lits) {
          double x = sol.x[wl.lit.var()];
          act += static_cast<double>(wl.coef) * (wl.lit.negated() ? 1.0 - x : x);
        }
        if (act < static_cast<double>(r.degree) - cfg_.ftol) {
          branch = ind.y;
          break;
        }
      }
      if (branch >= 0) break;
    }
    if (branch < 0) {
      double best_dist = 0.5 - cfg_.ftol;
      for (Var j = 0; j < p_.n_total; ++j) {
        if (vals[j] >= 0) continue;
        double dist = std::abs(sol.x[j] - 0.5);
        if (dist < best_dist) {
          best_dist = dist;
          branch = j;
        }
      }
    }
  }
  if (branch < 0) branch = pick_activity();
  if (branch < 0) return {};

  std::vector<Node> children(2);
  for (int side = 0; side < 2; ++side) {
    Node& ch = children[side];
    ch.decisions = node.decisions;
    ch.decisions.push_back(Lit(branch, side == 1));  // side 0 fixes to 1
    ch.bound = bound;
    ch.basis = sol.basis;
    ch.depth = node.depth + 1;
    ch.id = next_id_++;
  }
  return children;
}

void Solver::run_bnb() {
  build_lp();
  if (lp_.trivially_infeasible()) {
    exhausted_ = true;
    return;
  }
  Node root;
  root.id = next_id_++;
  queue_.push(std::move(root));
  std::optional<Node> current;
  int plunge = 0;
  while (!exhausted_) {
    if (limits_hit()) break;
    poll_mailbox();
    if (exhausted_) break;
    if (!current) {
      if (queue_.empty()) {
        exhausted_ = true;
        break;
      }
      global_bound_ = std::max(global_bound_, queue_.top().bound);
      if (maybe_restart()) {
        if (exhausted_) break;
        continue;
      }
      current = queue_.top();
      queue_.pop();
      plunge = 0;
    }
    Node node = std::move(*current);
    current.reset();
    if (pruned(node.bound)) continue;
    std::vector<Node> children = process(node);
    if (children.empty()) continue;
    if (plunge < 8) {
      ++plunge;
      queue_.push(std::move(children[1]));
      current = std::move(children[0]);
    } else {
      queue_.push(std::move(children[0]));
      queue_.push(std::move(children[1]));
    }
  }
}

}  // namespace

SolveResult solve(const EngineProblem& problem, const SolverConfig& config) {
  if (config.portfolio > 1) return solve_portfolio(problem, config);
  Solver s(problem, config);
  return s.run();
}

SolveResult solve_portfolio(const EngineProblem& problem, const SolverConfig& config) {
  const int k = std::max(1, config.portfolio);
  IncumbentMailbox mailbox;
  std::atomic<bool> stop{false};
  std::vector<SolveResult> results(k);
  std::vector<std::thread> threads;
  const Mode modes[] = {Mode::kDefault, Mode::kAggressiveHeur, Mode::kSatLike};
  for (int i = 0; i < k; ++i) {
    threads.emplace_back([&, i] {
      SolverConfig c = config;
      c.portfolio = 1;
      c.mode = i == 0 ? config.mode : modes[i % 3];
      c.seed = config.seed + 1000 * static_cast<std::uint64_t>(i);
      c.on_learned = nullptr;  // not thread safe
      c.mailbox = &mailbox;
      c.stop = &stop;
      results[i] = Solver(problem, c).run();
      if (results[i].status == SolveStatus::kOptimum || results[i].status == SolveStatus::kUnsatisfiable ||
          (results[i].status == SolveStatus::kSatisfiable && !problem.has_objective))
        stop = true;
    });
  }
  std::thread forward([&] {
    while (!stop.load()) {
      if (config.stop && config.stop->load()) stop = true;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  });
  for (auto& t : threads) t.join();
  stop = true;
  forward.join();

  SolveResult out;
  int winner = -1;
  for (int i = 0; i < k; ++i) {
    SolveStatus st = results[i].status;
    if (st == SolveStatus::kOptimum || st == SolveStatus::kUnsatisfiable) {
      winner = i;
      break;
    }
  }
  if (winner < 0)
    for (int i = 0; i < k; ++i)
      if (results[i].status == SolveStatus::kSatisfiable) winner = winner < 0 ? i : winner;
  out = results[winner < 0 ? 0 : winner];
  if (auto best = mailbox.best()) {
    if (!out.incumbent || best->objective < out.incumbent->objective) out.incumbent = best;
    if (out.status == SolveStatus::kUnknown) out.status = SolveStatus::kSatisfiable;
  }
  for (int i = 0; i < k; ++i)
    if (i != winner) out.stats.nodes += results[i].stats.nodes;
  return out;
}

}  // namespace pbsolve
