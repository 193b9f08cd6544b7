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

#include "pbsolve/opb.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <limits>
#include <sstream>

namespace pbsolve {

std::string Lit::to_string() const {
  return (negated() ? "~x" : "x") + std::to_string(var() + 1);
}

std::string int128_to_string(Int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // The most negative value cannot be negated; it never arises here.
  if (neg) v = -v;
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

bool Instance::is_linear() const {
  auto linear = [](const std::vector<Term>& terms) {
    return std::all_of(terms.begin(), terms.end(),
                       [](const Term& t) { return t.monomial.size() <= 1; });
  };
  if (objective && !linear(*objective)) return false;
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const PbConstraint& c) { return linear(c.terms); });
}

namespace {

constexpr Int128 kSaturate = Int128{1} << 120;

enum class TokKind { kInt, kLit, kRel, kSemi, kMin, kSoft, kWeight, kEnd };

struct Token {
  TokKind kind = TokKind::kEnd;
  Int128 value = 0;   // kInt, kWeight
  int var = 0;        // kLit (1-based)
  bool negated = false;
  std::string text;   // kRel
  int line = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  int header_vars() const { return header_vars_; }

  Token next() {
    skip_space_and_comments();
    Token tok;
    tok.line = line_;
    if (pos_ >= text_.size()) return tok;
    char c = text_[pos_];
    if (c == ';') {
      ++pos_;
      tok.kind = TokKind::kSemi;
      return tok;
    }
    if (c == '[') {
      ++pos_;
      skip_inline_space();
      tok.kind = TokKind::kWeight;
      tok.value = read_integer(tok.line);
      skip_inline_space();
      if (pos_ >= text_.size() || text_[pos_] != ']') throw ParseError(line_, "expected ']'");
      ++pos_;
      return tok;
    }
    if (c == '>' || c == '<' || c == '=') {
      std::string rel(1, c);
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '=') {
        rel.push_back('=');
        ++pos_;
      }
      if (rel != ">=" && rel != "=") throw ParseError(line_, "unsupported relation '" + rel + "'");
      tok.kind = TokKind::kRel;
      tok.text = rel;
      return tok;
    }
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      tok.kind = TokKind::kInt;
      tok.value = read_integer(tok.line);
      return tok;
    }
    if (c == 'x' || c == '~') {
      tok.kind = TokKind::kLit;
      if (c == '~') {
        tok.negated = true;
        ++pos_;
        if (pos_ >= text_.size() || text_[pos_] != 'x') throw ParseError(line_, "malformed literal");
      }
      ++pos_;
      size_t start = pos_;
      Int128 v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_] - '0');
        if (v > (Int128{1} << 30)) throw ParseError(line_, "variable index too large");
        ++pos_;
      }
      if (pos_ == start || v == 0) throw ParseError(line_, "malformed variable name");
      expect_separator();
      tok.var = static_cast<int>(v);
      return tok;
    }
    if (text_.substr(pos_, 4) == "min:") {
      pos_ += 4;
      tok.kind = TokKind::kMin;
      return tok;
    }
    if (text_.substr(pos_, 5) == "soft:") {
      pos_ += 5;
      tok.kind = TokKind::kSoft;
      return tok;
    }
    size_t end = pos_;
    while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end]))) ++end;
    throw ParseError(line_, "malformed token '" + std::string(text_.substr(pos_, end - pos_)) + "'");
  }

 private:
  void skip_inline_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r'))
      ++pos_;
  }

  void skip_space_and_comments() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        if (text_[pos_] == '\n') {
          ++line_;
          at_line_start_ = true;
        }
        ++pos_;
      }
      if (pos_ < text_.size() && text_[pos_] == '*' && at_line_start_) {
        size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos) end = text_.size();
        read_header(text_.substr(pos_, end - pos_));
        pos_ = end;
        continue;
      }
      at_line_start_ = false;
      return;
    }
  }

  void read_header(std::string_view comment) {
    auto at = comment.find("#variable=");
    if (at == std::string_view::npos) return;
    std::istringstream in{std::string(comment.substr(at + 10))};
    int n = 0;
    if (in >> n && n > 0) header_vars_ = std::max(header_vars_, n);
  }

  Int128 read_integer(int line) {
    bool neg = false;
    if (text_[pos_] == '+' || text_[pos_] == '-') {
      neg = text_[pos_] == '-';
      ++pos_;
      skip_inline_space();
    }
    size_t start = pos_;
    Int128 v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v < kSaturate) v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) throw ParseError(line, "expected integer");
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
      throw ParseError(line, "non-integer coefficient");
    expect_separator();
    return neg ? -v : v;
  }

  void expect_separator() {
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ';' || c == ']' || c == '>' || c == '=' ||
        c == '<')
      return;
    throw ParseError(line_, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  bool at_line_start_ = true;
  int header_vars_ = 0;
};

// Polynomial accumulator preserving first-appearance order of monomials.
class Poly {
 public:
  void add(std::vector<int> monomial, Int128 coef) {
    if (coef == 0) return;
    auto [it, inserted] = index_.try_emplace(monomial, order_.size());
    if (inserted) order_.push_back({std::move(monomial), 0});
    Int128& c = order_[it->second].second;
    c += coef;
    if (c > kSaturate) c = kSaturate;
    if (c < -kSaturate) c = -kSaturate;
  }

  Int128 constant() const {
    auto it = index_.find({});
    return it == index_.end() ? 0 : order_[it->second].second;
  }

  const std::vector<std::pair<std::vector<int>, Int128>>& entries() const { return order_; }

 private:
  std::map<std::vector<int>, size_t> index_;
  std::vector<std::pair<std::vector<int>, Int128>> order_;
};

Int to_int64(Int128 v) {
  if (v > std::numeric_limits<Int>::max() || v < -std::numeric_limits<Int>::max())
    throw UnsupportedIntsize(bit_length(v));
  return static_cast<Int>(v);
}

// Rejects a statement whose integers need more than kMaxIntsize bits before
// any of them is narrowed, so the reported intsize is the real one.
void check_width(const Poly& poly, Int128 extra) {
  auto mag = [](Int128 v) { return v < 0 ? -v : v; };
  Int128 sum = mag(extra);
  for (const auto& [mono, c] : poly.entries()) {
    if (mono.empty()) continue;
    sum += mag(c);
    if (sum > kSaturate) sum = kSaturate;
  }
  if (sum > kSaturate) sum = kSaturate;
  int bits = bit_length(sum);
  if (bits > kMaxIntsize) throw UnsupportedIntsize(bits);
}

// Expands coef * prod(lits) into monomials over positive variables.
void add_product(Poly& poly, Int128 coef, const std::vector<Token>& lits, int line) {
  std::vector<int> vars;
  for (const Token& t : lits) vars.push_back(t.var);
  std::sort(vars.begin(), vars.end());
  if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
    throw ParseError(line, "duplicate variable in product");

  std::vector<std::pair<std::vector<int>, Int128>> expanded{{{}, coef}};
  for (const Token& t : lits) {
    std::vector<std::pair<std::vector<int>, Int128>> next;
    for (auto& [mono, c] : expanded) {
      std::vector<int> with = mono;
      with.insert(std::upper_bound(with.begin(), with.end(), t.var), t.var);
      if (t.negated) {
        next.push_back({mono, c});
        next.push_back({std::move(with), -c});
      } else {
        next.push_back({std::move(with), c});
      }
    }
    expanded = std::move(next);
  }
  for (auto& [mono, c] : expanded) poly.add(std::move(mono), c);
}

struct Statement {
  std::optional<Int128> weight;
  Poly poly;
  std::optional<std::string> relation;
  std::optional<Int128> rhs;
};

std::vector<Term> to_terms(const Poly& poly) {
  std::vector<Term> terms;
  for (const auto& [mono, c] : poly.entries()) {
    if (mono.empty() || c == 0) continue;
    terms.push_back({to_int64(c), mono});
  }
  return terms;
}

}  // namespace

Instance parse_opb(std::string_view text) {
  Lexer lex(text);
  Instance inst;
  bool seen_soft_header = false;
  int max_index = 0;

  Token tok = lex.next();
  while (tok.kind != TokKind::kEnd) {
    const int line = tok.line;
    if (tok.kind == TokKind::kSoft) {
      if (seen_soft_header) throw ParseError(line, "duplicate soft: header");
      seen_soft_header = true;
      inst.is_wbo = true;
      tok = lex.next();
      if (tok.kind == TokKind::kInt) {
        if (tok.value <= 0) throw ParseError(line, "top cost must be positive");
        inst.top_cost = to_int64(tok.value);
        tok = lex.next();
      }
      if (tok.kind != TokKind::kSemi) throw ParseError(tok.line, "expected ';' after soft header");
      tok = lex.next();
      continue;
    }

    bool is_objective = false;
    Statement st;
    if (tok.kind == TokKind::kMin) {
      if (inst.objective) throw ParseError(line, "duplicate objective");
      is_objective = true;
      tok = lex.next();
    } else if (tok.kind == TokKind::kWeight) {
      if (tok.value <= 0) throw ParseError(line, "soft weight must be positive");
      st.weight = tok.value;
      inst.is_wbo = true;
      tok = lex.next();
    }

    // terms
    while (tok.kind == TokKind::kInt) {
      Int128 coef = tok.value;
      int term_line = tok.line;
      std::vector<Token> lits;
      tok = lex.next();
      while (tok.kind == TokKind::kLit) {
        max_index = std::max(max_index, tok.var);
        lits.push_back(tok);
        tok = lex.next();
      }
      if (lits.empty()) throw ParseError(term_line, "coefficient without variable");
      add_product(st.poly, coef, lits, term_line);
    }

    if (is_objective) {
      if (tok.kind != TokKind::kSemi) throw ParseError(tok.line, "malformed objective");
      check_width(st.poly, st.poly.constant());
      inst.objective = to_terms(st.poly);
      inst.objective_constant = to_int64(st.poly.constant());
      tok = lex.next();
      continue;
    }

    if (tok.kind != TokKind::kRel) throw ParseError(tok.line, "expected relation '>=' or '='");
    st.relation = tok.text;
    tok = lex.next();
    if (tok.kind != TokKind::kInt) throw ParseError(tok.line, "expected right-hand side");
    st.rhs = tok.value;
    tok = lex.next();
    if (tok.kind != TokKind::kSemi) throw ParseError(tok.line, "expected ';'");
    tok = lex.next();

    check_width(st.poly, *st.rhs - st.poly.constant());
    PbConstraint c;
    c.terms = to_terms(st.poly);
    c.relation = *st.relation == "=" ? Relation::kEq : Relation::kGe;
    c.rhs = to_int64(*st.rhs - st.poly.constant());
    if (st.weight) c.weight = to_int64(*st.weight);
    inst.constraints.push_back(std::move(c));
  }

  if (inst.is_wbo && inst.objective) throw ParseError(1, "objective is not allowed in WBO files");
  inst.n_vars = std::max(lex.header_vars(), max_index);
  inst.intsize = compute_intsize(inst);
  if (inst.intsize > kMaxIntsize) throw UnsupportedIntsize(inst.intsize);
  return inst;
}

Instance parse_opb_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_opb(buf.str());
}

int compute_intsize(const Instance& inst) {
  auto sum_bits = [](const std::vector<Term>& terms, Int extra) {
    Int128 sum = extra < 0 ? -Int128{extra} : Int128{extra};
    for (const Term& t : terms) {
      sum += t.coef < 0 ? -Int128{t.coef} : Int128{t.coef};
      if (sum > kSaturate) sum = kSaturate;
    }
    return bit_length(sum);
  };
  int bits = 0;
  if (inst.objective) bits = std::max(bits, sum_bits(*inst.objective, inst.objective_constant));
  for (const PbConstraint& c : inst.constraints) bits = std::max(bits, sum_bits(c.terms, c.rhs));
  return bits;
}

namespace {

void write_terms(std::ostream& out, const std::vector<Term>& terms) {
  for (const Term& t : terms) {
    out << (t.coef >= 0 ? "+" : "") << t.coef;
    for (int v : t.monomial) out << " x" << v;
    out << ' ';
  }
}

}  // namespace

std::string write_opb(const Instance& inst) {
  std::ostringstream out;
  out << "* #variable= " << inst.n_vars << " #constraint= " << inst.constraints.size() << "\n";
  if (inst.is_wbo) {
    out << "soft: ";
    if (inst.top_cost) out << *inst.top_cost;
    out << ";\n";
  }
  if (inst.objective) {
    out << "min: ";
    write_terms(out, *inst.objective);
    if (inst.objective_constant != 0) {
      // c*~x1 + c*x1 folds back to the constant c.
      Int c = inst.objective_constant;
      out << (c >= 0 ? "+" : "") << c << " ~x1 " << (c >= 0 ? "+" : "") << c << " x1 ";
    }
    out << ";\n";
  }
  for (const PbConstraint& c : inst.constraints) {
    if (c.weight) out << '[' << *c.weight << "] ";
    write_terms(out, c.terms);
    out << (c.relation == Relation::kEq ? "= " : ">= ") << c.rhs << " ;\n";
  }
  return out.str();
}

std::string_view status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kSatisfiable:
      return "SATISFIABLE";
    case SolveStatus::kOptimum:
      return "OPTIMUM FOUND";
    case SolveStatus::kUnsatisfiable:
      return "UNSATISFIABLE";
    case SolveStatus::kUnknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

void emit_objective(Int128 value, std::ostream& sink) {
  sink << "o " << int128_to_string(value) << '\n' << std::flush;
}

void emit_comment(std::string_view text, std::ostream& sink) {
  sink << "c " << text << '\n' << std::flush;
}

void emit_result(SolveStatus status, std::optional<Int128> best_obj,
                 const std::optional<std::vector<int>>& model, std::ostream& sink) {
  if (best_obj) emit_objective(*best_obj, sink);
  sink << "s " << status_name(status) << '\n' << std::flush;
  if (model) {
    sink << 'v';
    for (size_t i = 0; i < model->size(); ++i)
      sink << ' ' << ((*model)[i] ? "" : "-") << 'x' << (i + 1);
    sink << '\n' << std::flush;
  }
}

}  // namespace pbsolve
