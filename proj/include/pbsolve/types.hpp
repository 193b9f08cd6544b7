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

#ifndef PBSOLVE_TYPES_HPP_
#define PBSOLVE_TYPES_HPP_

#include <cstdint>
#include <functional>
#include <string>

namespace pbsolve {

using Int = std::int64_t;
using Int128 = __int128;

// Engine variables are 0-based. Instance (file) variables are 1-based.
using Var = int;

/// A literal is a variable or its negation 1 - x.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool negated) : code_(2 * v + (negated ? 1 : 0)) {}

  static constexpr Lit pos(Var v) { return Lit(v, false); }
  static constexpr Lit neg(Var v) { return Lit(v, true); }
  static constexpr Lit from_code(int code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negated() const { return (code_ & 1) != 0; }
  constexpr int code() const { return code_; }
  constexpr Lit operator~() const { return from_code(code_ ^ 1); }

  // Value of the literal when its variable takes `value`.
  constexpr int eval(int value) const { return negated() ? 1 - value : value; }

  friend constexpr bool operator==(Lit a, Lit b) { return a.code_ == b.code_; }
  friend constexpr bool operator!=(Lit a, Lit b) { return a.code_ != b.code_; }
  friend constexpr bool operator<(Lit a, Lit b) { return a.code_ < b.code_; }

  std::string to_string() const;

 private:
  int code_ = -2;
};

inline constexpr Int kMaxCoefficient = Int{1} << 62;

/// Number of bits needed to write `v` (0 for 0).
inline int bit_length(Int128 v) {
  if (v < 0) v = -v;
  int bits = 0;
  while (v > 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

inline Int128 ceil_div(Int128 a, Int128 b) {
  // b > 0
  Int128 q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

std::string int128_to_string(Int128 v);

}  // namespace pbsolve

template <>
struct std::hash<pbsolve::Lit> {
  size_t operator()(pbsolve::Lit l) const noexcept { return std::hash<int>()(l.code()); }
};

#endif  // PBSOLVE_TYPES_HPP_
