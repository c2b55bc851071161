// Copyright 2026 The SBN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SBN_VALUE_H_
#define SBN_VALUE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sbn/rational.h"

namespace sbn {

// Exact decimal: units * 10^-decimals. Kept normalized (no trailing zero
// digits in units), so defaulted equality is value equality.
class FixedPoint {
 public:
  static constexpr int kMaxDecimals = 15;

  constexpr FixedPoint() = default;
  FixedPoint(std::int64_t units, int decimals);

  static FixedPoint Parse(std::string_view text);
  // Shortest decimal that round-trips through double.
  static FixedPoint FromDouble(double x);

  std::int64_t units() const { return units_; }
  int decimals() const { return decimals_; }
  double ToDouble() const;
  std::string ToString() const;

  friend bool operator==(const FixedPoint&, const FixedPoint&) = default;
  friend std::strong_ordering operator<=>(const FixedPoint& a,
                                          const FixedPoint& b);

 private:
  std::int64_t units_ = 0;
  int decimals_ = 0;
};

Rational FromFixed(const FixedPoint& f);

using PayoffVector = std::vector<FixedPoint>;

// A node value: integer, symbol, or payoff tuple (payoff-node domains only).
using Value = std::variant<std::int64_t, std::string, PayoffVector>;

std::string ToString(const Value& v);
bool IsPayoff(const Value& v);

// Ordered, canonical list of node values. Position is the value's index in
// every CPD row over this domain.
class Domain {
 public:
  Domain() = default;
  explicit Domain(std::vector<Value> values);

  static Domain Integers(std::int64_t first, std::int64_t last);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const Value& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Value>& values() const { return values_; }
  std::optional<std::size_t> IndexOf(const Value& v) const;
  // First value that appears more than once, if any.
  std::optional<Value> FirstDuplicate() const;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<Value> values_;
  std::vector<std::uint32_t> sorted_;  // permutation sorting values_
};

}  // namespace sbn

#endif  // SBN_VALUE_H_
