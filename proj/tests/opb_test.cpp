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

#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "pbsolve/opb.hpp"
#include "support/random_instance.hpp"

using namespace pbsolve;

namespace {

// Decimal big integer: digits little-endian. Only addition is needed.
std::string big_add(const std::string& a, const std::string& b) {
  std::string out;
  int carry = 0;
  for (size_t i = 0; i < std::max(a.size(), b.size()) || carry; ++i) {
    int d = carry + (i < a.size() ? a[i] - '0' : 0) + (i < b.size() ? b[i] - '0' : 0);
    out.push_back(static_cast<char>('0' + d % 10));
    carry = d / 10;
  }
  return out;
}

std::string big_abs(Int v) {
  std::string s = std::to_string(v);
  if (s[0] == '-') s.erase(0, 1);
  return {s.rbegin(), s.rend()};
}

// Bit length by repeated halving of the decimal string.
int big_bits(std::string n) {
  while (n.size() > 1 && n.back() == '0') n.pop_back();
  int bits = 0;
  while (!(n.size() == 1 && n[0] == '0')) {
    int rem = 0;
    for (size_t i = n.size(); i-- > 0;) {
      int cur = rem * 10 + (n[i] - '0');
      n[i] = static_cast<char>('0' + cur / 2);
      rem = cur % 2;
    }
    while (n.size() > 1 && n.back() == '0') n.pop_back();
    ++bits;
  }
  return bits;
}

int reference_intsize(const Instance& inst) {
  int best = 0;
  auto consider = [&](const std::vector<Term>& terms, Int extra) {
    std::string sum = big_abs(extra);
    for (const Term& t : terms) sum = big_add(sum, big_abs(t.coef));
    best = std::max(best, big_bits(sum));
  };
  if (inst.objective) consider(*inst.objective, inst.objective_constant);
  for (const auto& c : inst.constraints) consider(c.terms, c.rhs);
  return best;
}

}  // namespace

TEST_CASE("parse linear objective and constraint") {
  Instance inst = parse_opb("min: +1 x1;\n+1 x1 +1 x2 >= 1;");
  REQUIRE(inst.objective.has_value());
  CHECK(*inst.objective == std::vector<Term>{{1, {1}}});
  REQUIRE(inst.constraints.size() == 1);
  CHECK(inst.constraints[0].terms == std::vector<Term>{{1, {1}}, {1, {2}}});
  CHECK(inst.constraints[0].relation == Relation::kGe);
  CHECK(inst.constraints[0].rhs == 1);
  CHECK(inst.n_vars == 2);
}

TEST_CASE("parse nonlinear term") {
  Instance inst = parse_opb("+2 x1 x2 +1 x3 >= 1;");
  REQUIRE(inst.constraints.size() == 1);
  CHECK(inst.constraints[0].terms == std::vector<Term>{{2, {1, 2}}, {1, {3}}});
  CHECK_FALSE(inst.objective.has_value());
  CHECK_FALSE(inst.is_linear());
}

TEST_CASE("parse wbo header and weights") {
  Instance inst = parse_opb("soft: 6;\n[2] +1 x1 >= 1;\n+1 x2 >= 1;");
  CHECK(inst.is_wbo);
  CHECK(inst.top_cost == 6);
  REQUIRE(inst.constraints.size() == 2);
  CHECK(inst.constraints[0].weight == 2);
  CHECK_FALSE(inst.constraints[1].weight.has_value());
}

TEST_CASE("comments, header and equality") {
  Instance inst = parse_opb("* #variable= 5 #constraint= 1\n* a comment x9\n+1 x1 -1 x2 = 0 ;\n");
  CHECK(inst.n_vars == 5);
  CHECK(inst.constraints[0].relation == Relation::kEq);
}

TEST_CASE("negated literals are folded into coefficients") {
  // 3*(1-x1) + 2*x2 >= 2  ->  -3 x1 + 2 x2 >= -1
  Instance inst = parse_opb("+3 ~x1 +2 x2 >= 2;");
  CHECK(inst.constraints[0].terms == std::vector<Term>{{-3, {1}}, {2, {2}}});
  CHECK(inst.constraints[0].rhs == -1);
  // 2*x1*(1-x2) = 2 x1 - 2 x1 x2
  Instance prod = parse_opb("min: +2 x1 ~x2 +1 ~x3;");
  CHECK(*prod.objective == std::vector<Term>{{2, {1}}, {-2, {1, 2}}, {-1, {3}}});
  CHECK(prod.objective_constant == 1);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_opb(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("+1 x1 >= 1;\n+1 x1 x1 >= 1;") == 2);
  CHECK(line_of("+1 x1 <= 1;") == 1);
  CHECK(line_of("\n\n+1.5 x1 >= 1;") == 3);
  CHECK(line_of("+1 y1 >= 1;") == 1);
  CHECK(line_of("+1 x1 > 1;") == 1);
  CHECK(line_of("+1 x1 >= 1") == 1);
  CHECK(line_of("+1 x1 x2 >= 1;\n+1 ~x1 x1 >= 0;") == 2);
}

TEST_CASE("intsize examples") {
  CHECK(parse_opb("+3 x1 -5 x2 >= -2;").intsize == 4);
  CHECK(parse_opb("+1 x1 >= 1;").intsize == 2);
  std::string text = "+5567264 x1";
  for (int i = 2; i <= 52; ++i) text += " +" + std::to_string(1000 + i) + " x" + std::to_string(i);
  text += " = 5842800;";
  CHECK(parse_opb(text).intsize >= 24);
}

TEST_CASE("intsize above 62 bits is rejected") {
  CHECK_THROWS_AS(parse_opb("+4611686018427387904 x1 >= 1;"), UnsupportedIntsize);
  CHECK_THROWS_AS(parse_opb("+99999999999999999999999 x1 >= 1;"), UnsupportedIntsize);
  CHECK_NOTHROW(parse_opb("+1152921504606846975 x1 >= 1;"));
}

TEST_CASE("write then parse is the identity on random instances") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 1000; ++iter) {
    testing::RandomSpec spec;
    spec.n_vars = static_cast<int>(testing::uniform(rng, 1, 12));
    spec.n_constraints = static_cast<int>(testing::uniform(rng, 0, 8));
    spec.max_monomial = static_cast<int>(testing::uniform(rng, 1, 3));
    spec.max_coef = testing::uniform(rng, 1, 1000000);
    spec.wbo = iter % 3 == 0;
    spec.objective = iter % 2 == 0;
    Instance inst = testing::random_instance(rng, spec);
    if (inst.objective && iter % 5 == 0) inst.objective_constant = testing::uniform(rng, -50, 50);
    inst.intsize = compute_intsize(inst);
    Instance back = parse_opb(write_opb(inst));
    REQUIRE(back == inst);
  }
}

TEST_CASE("compute_intsize agrees with decimal big-integer reference") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 500; ++iter) {
    testing::RandomSpec spec;
    spec.n_vars = 10;
    spec.max_terms = 8;
    spec.max_coef = Int{1} << testing::uniform(rng, 1, 58);
    Instance inst = testing::random_instance(rng, spec);
    CHECK(compute_intsize(inst) == reference_intsize(inst));
  }
}

TEST_CASE("parser never produces repeated indices in a monomial") {
  std::mt19937_64 rng(99);
  int accepted = 0;
  for (int iter = 0; iter < 2000; ++iter) {
    std::string text;
    int terms = static_cast<int>(testing::uniform(rng, 1, 5));
    for (int t = 0; t < terms; ++t) {
      text += "+" + std::to_string(testing::uniform(rng, 1, 9));
      int width = static_cast<int>(testing::uniform(rng, 1, 4));
      for (int k = 0; k < width; ++k)
        text += std::string(testing::uniform(rng, 0, 2) == 0 ? " ~x" : " x") +
                std::to_string(testing::uniform(rng, 1, 4));
      text += " ";
    }
    text += ">= 1;";
    try {
      Instance inst = parse_opb(text);
      ++accepted;
      for (const auto& c : inst.constraints)
        for (const auto& term : c.terms) {
          REQUIRE(std::is_sorted(term.monomial.begin(), term.monomial.end()));
          REQUIRE(std::adjacent_find(term.monomial.begin(), term.monomial.end()) == term.monomial.end());
          REQUIRE_FALSE(term.monomial.empty());
          REQUIRE(term.coef != 0);
        }
    } catch (const ParseError&) {
    }
  }
  CHECK(accepted > 100);
}

TEST_CASE("emit_result protocol lines") {
  std::ostringstream out;
  emit_result(SolveStatus::kOptimum, Int128{3}, std::vector<int>{1, 0}, out);
  CHECK(out.str() == "o 3\ns OPTIMUM FOUND\nv x1 -x2\n");

  std::ostringstream unsat;
  emit_result(SolveStatus::kUnsatisfiable, std::nullopt, std::nullopt, unsat);
  CHECK(unsat.str() == "s UNSATISFIABLE\n");

  std::ostringstream unknown;
  emit_result(SolveStatus::kUnknown, std::nullopt, std::nullopt, unknown);
  CHECK(unknown.str() == "s UNKNOWN\n");
}
