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

#include "pbsolve/model.hpp"

#include <algorithm>
#include <map>

namespace pbsolve {

Int128 NormConstraint::coef_sum() const {
  Int128 s = 0;
  for (const WeightedLit& wl : lits) s += wl.coef;
  return s;
}

bool NormConstraint::satisfied_by(std::span<const int> values) const {
  Int128 act = 0;
  for (const WeightedLit& wl : lits) act += wl.coef * wl.lit.eval(values[wl.lit.var()]);
  return act >= degree;
}

Int128 EngineProblem::objective_value(std::span<const int> values) const {
  Int128 v = objective_offset;
  for (Var j = 0; j < n_total; ++j) v += Int128{objective[j]} * values[j];
  return v;
}

bool EngineProblem::feasible(std::span<const int> values) const {
  for (const NormConstraint& row : hard)
    if (!row.satisfied_by(values)) return false;
  for (const IndicatorRow& ind : indicators) {
    if (!values[ind.y]) continue;
    for (const NormConstraint& row : ind.rows)
      if (!row.satisfied_by(values)) return false;
  }
  if (objective_cap && objective_value(values) > *objective_cap) return false;
  return true;
}

std::vector<NormConstraint> normalize(std::span<const LinearTerm> terms, Relation relation, Int rhs) {
  std::map<Var, Int128> merged;
  for (const LinearTerm& t : terms) merged[t.var] += t.coef;

  auto build = [&](int sign, Int128 bound) -> std::optional<NormConstraint> {
    NormConstraint row;
    Int128 degree = bound;
    std::vector<std::pair<Int128, Lit>> lits;
    for (const auto& [var, c] : merged) {
      Int128 a = sign * c;
      if (a > 0) {
        lits.push_back({a, Lit::pos(var)});
      } else if (a < 0) {
        // a*x = a + |a|*(1-x)
        lits.push_back({-a, Lit::neg(var)});
        degree -= a;
      }
    }
    if (degree <= 0) return std::nullopt;
    if (degree > kMaxCoefficient) throw std::overflow_error("normalized degree exceeds 2^62");
    row.degree = static_cast<Int>(degree);
    for (const auto& [a, lit] : lits) row.lits.push_back({static_cast<Int>(std::min(a, degree)), lit});
    return row;
  };

  std::vector<NormConstraint> out;
  if (auto ge = build(1, rhs)) out.push_back(std::move(*ge));
  if (relation == Relation::kEq) {
    if (auto le = build(-1, -Int128{rhs})) out.push_back(std::move(*le));
  }
  return out;
}

std::pair<std::vector<LinearTerm>, Int> to_linear(const NormConstraint& row) {
  std::vector<LinearTerm> terms;
  Int rhs = row.degree;
  for (const WeightedLit& wl : row.lits) {
    if (wl.lit.negated()) {
      terms.push_back({wl.lit.var(), -wl.coef});
      rhs -= wl.coef;
    } else {
      terms.push_back({wl.lit.var(), wl.coef});
    }
  }
  return {std::move(terms), rhs};
}

NormConstraint indicator_as_row(Var y, const NormConstraint& row) {
  NormConstraint out = row;
  out.lits.push_back({row.degree, Lit::neg(y)});
  return out;
}

namespace {

class Linearizer {
 public:
  explicit Linearizer(const Instance& inst) : inst_(inst) {
    p_.n_orig = inst.n_vars;
    p_.n_total = inst.n_vars;
    p_.kinds.assign(inst.n_vars, VarKind::kOriginal);
  }

  EngineProblem run() {
    // Allocate AND variables in order of first appearance.
    if (inst_.objective)
      for (const Term& t : *inst_.objective) var_of(t.monomial);
    for (const PbConstraint& c : inst_.constraints)
      for (const Term& t : c.terms) var_of(t.monomial);

    for (const AndDef& def : p_.and_defs) {
      for (Var x : def.operands) {
        // z <= x
        NormConstraint link;
        link.lits = {{1, Lit::pos(x)}, {1, Lit::neg(def.z)}};
        link.degree = 1;
        p_.hard.push_back(std::move(link));
      }
      // z >= sum(x) - (|M| - 1)
      NormConstraint up;
      up.lits.push_back({1, Lit::pos(def.z)});
      for (Var x : def.operands) up.lits.push_back({1, Lit::neg(x)});
      up.degree = 1;
      p_.hard.push_back(std::move(up));
    }
    p_.and_link_rows = static_cast<int>(p_.hard.size());

    for (const PbConstraint& c : inst_.constraints) {
      std::vector<LinearTerm> terms = linear_terms(c.terms);
      std::vector<NormConstraint> rows = normalize(terms, c.relation, c.rhs);
      if (!c.weight) {
        for (NormConstraint& row : rows) {
          if (row.infeasible()) p_.trivially_infeasible = true;
          p_.hard.push_back(std::move(row));
        }
      } else {
        IndicatorRow ind;
        ind.y = new_var(VarKind::kIndicator);
        ind.rows = std::move(rows);
        ind.weight = *c.weight;
        p_.indicators.push_back(std::move(ind));
      }
    }

    p_.objective.assign(p_.n_total, 0);
    if (inst_.objective) {
      p_.has_objective = true;
      p_.objective_offset = inst_.objective_constant;
      for (const LinearTerm& t : linear_terms(*inst_.objective)) p_.objective[t.var] += t.coef;
    }
    if (inst_.is_wbo) {
      // sum w * (1 - y)
      p_.has_objective = true;
      for (const IndicatorRow& ind : p_.indicators) {
        p_.objective[ind.y] -= ind.weight;
        p_.objective_offset += ind.weight;
      }
      if (inst_.top_cost) p_.objective_cap = *inst_.top_cost - 1;
    }
    p_.original = std::make_shared<const Instance>(inst_);
    return std::move(p_);
  }

 private:
  Var new_var(VarKind kind) {
    p_.kinds.push_back(kind);
    return p_.n_total++;
  }

  Var var_of(const std::vector<int>& monomial) {
    if (monomial.size() == 1) return monomial[0] - 1;
    auto it = and_vars_.find(monomial);
    if (it != and_vars_.end()) return it->second;
    AndDef def;
    def.z = new_var(VarKind::kAnd);
    for (int v : monomial) def.operands.push_back(v - 1);
    and_vars_.emplace(monomial, def.z);
    p_.and_defs.push_back(std::move(def));
    return p_.and_defs.back().z;
  }

  std::vector<LinearTerm> linear_terms(const std::vector<Term>& terms) {
    std::vector<LinearTerm> out;
    for (const Term& t : terms) out.push_back({var_of(t.monomial), t.coef});
    return out;
  }

  const Instance& inst_;
  EngineProblem p_;
  std::map<std::vector<int>, Var> and_vars_;
};

}  // namespace

EngineProblem linearize(const Instance& inst) { return Linearizer(inst).run(); }

void complete_assignment(const EngineProblem& problem, std::vector<int>& values) {
  values.resize(problem.n_total, 0);
  for (const AndDef& def : problem.and_defs) {
    int v = 1;
    for (Var x : def.operands) v &= values[x];
    values[def.z] = v;
  }
  for (const IndicatorRow& ind : problem.indicators) {
    bool ok = std::all_of(ind.rows.begin(), ind.rows.end(),
                          [&](const NormConstraint& r) { return r.satisfied_by(values); });
    values[ind.y] = ok ? 1 : 0;
  }
}

namespace {

Int128 eval_terms(const std::vector<Term>& terms, const std::vector<int>& x) {
  Int128 s = 0;
  for (const Term& t : terms) {
    bool on = true;
    for (int v : t.monomial) on = on && x[v - 1];
    if (on) s += t.coef;
  }
  return s;
}

}  // namespace

OracleResult oracle_solve(const Instance& inst, int var_cap) {
  if (inst.n_vars > var_cap) throw OracleLimitExceeded();
  OracleResult best;
  const bool optimize = inst.has_objective();
  std::vector<int> x(inst.n_vars, 0);
  const std::uint64_t total = std::uint64_t{1} << inst.n_vars;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < inst.n_vars; ++i) x[i] = static_cast<int>((mask >> i) & 1);
    bool feasible = true;
    Int128 cost = 0;
    for (const PbConstraint& c : inst.constraints) {
      Int128 act = eval_terms(c.terms, x);
      bool ok = c.relation == Relation::kEq ? act == c.rhs : act >= c.rhs;
      if (ok) continue;
      if (c.weight) {
        cost += *c.weight;
      } else {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    if (inst.is_wbo && inst.top_cost && cost >= *inst.top_cost) continue;
    Int128 value = inst.is_wbo ? cost
                               : (inst.objective ? eval_terms(*inst.objective, x) + inst.objective_constant : 0);
    if (!best.model || (optimize && value < *best.objective)) {
      best.model = x;
      best.objective = value;
      if (!optimize) break;
    }
  }
  if (!best.model) {
    best.status = SolveStatus::kUnsatisfiable;
    best.objective.reset();
  } else if (optimize) {
    best.status = SolveStatus::kOptimum;
  } else {
    best.status = SolveStatus::kSatisfiable;
    best.objective.reset();
  }
  return best;
}

}  // namespace pbsolve
