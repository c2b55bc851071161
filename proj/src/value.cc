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

#include "sbn/value.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "sbn/error.h"

namespace sbn {
namespace {

constexpr std::array<std::int64_t, 19> kPow10 = [] {
  std::array<std::int64_t, 19> p{};
  p[0] = 1;
  for (std::size_t i = 1; i < p.size(); ++i) p[i] = p[i - 1] * 10;
  return p;
}();

__int128 Scaled(const FixedPoint& f, int decimals) {
  return static_cast<__int128>(f.units()) * kPow10[decimals - f.decimals()];
}

}  // namespace

FixedPoint::FixedPoint(std::int64_t units, int decimals)
    : units_(units), decimals_(decimals) {
  if (decimals < 0 || decimals > kMaxDecimals) {
    throw ContractError("fixed-point decimals out of range: " +
                        std::to_string(decimals));
  }
  while (decimals_ > 0 && units_ % 10 == 0) {
    units_ /= 10;
    --decimals_;
  }
  if (units_ == 0) decimals_ = 0;
}

FixedPoint FixedPoint::Parse(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> FixedPoint {
    throw ParseError("malformed decimal '" + original + "'");
  };
  if (text.empty()) return fail();
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  __int128 units = 0;
  int decimals = 0;
  bool seen_digit = false;
  bool seen_point = false;
  std::size_t i = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      seen_digit = true;
      units = units * 10 + (c - '0');
      if (seen_point) ++decimals;
      if (units > std::numeric_limits<std::int64_t>::max()) {
        throw ParseError("decimal out of range '" + original + "'");
      }
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return fail();
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return fail();
    std::string_view rest = text.substr(i + 1);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] =
        std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) return fail();
  }
  decimals -= exponent;
  // Strip trailing zeros before judging precision.
  while (decimals > 0 && units != 0 && units % 10 == 0) {
    units /= 10;
    --decimals;
  }
  if (units == 0) decimals = 0;
  while (decimals < 0) {
    units *= 10;
    ++decimals;
    if (units > std::numeric_limits<std::int64_t>::max()) {
      throw ParseError("decimal out of range '" + original + "'");
    }
  }
  if (decimals > kMaxDecimals) {
    throw ParseError("decimal has more than " + std::to_string(kMaxDecimals) +
                     " places '" + original + "'");
  }
  auto u = static_cast<std::int64_t>(units);
  return FixedPoint(negative ? -u : u, decimals);
}

FixedPoint FixedPoint::FromDouble(double x) {
  if (!std::isfinite(x)) throw ContractError("non-finite payoff value");
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return Parse(std::string_view(buf.data(), ptr - buf.data()));
}

double FixedPoint::ToDouble() const {
  return static_cast<double>(units_) / static_cast<double>(kPow10[decimals_]);
}

std::string FixedPoint::ToString() const {
  if (decimals_ == 0) return std::to_string(units_);
  std::string digits = std::to_string(units_ < 0 ? -units_ : units_);
  if (static_cast<int>(digits.size()) <= decimals_) {
    digits.insert(0, decimals_ + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - decimals_, ".");
  return units_ < 0 ? "-" + digits : digits;
}

std::strong_ordering operator<=>(const FixedPoint& a, const FixedPoint& b) {
  int d = std::max(a.decimals(), b.decimals());
  __int128 lhs = Scaled(a, d);
  __int128 rhs = Scaled(b, d);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string ToString(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  const auto& p = std::get<PayoffVector>(v);
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) out += ",";
    out += p[i].ToString();
  }
  return out + ")";
}

bool IsPayoff(const Value& v) {
  return std::holds_alternative<PayoffVector>(v);
}

Domain::Domain(std::vector<Value> values) : values_(std::move(values)) {
  sorted_.resize(values_.size());
  std::iota(sorted_.begin(), sorted_.end(), 0u);
  std::stable_sort(sorted_.begin(), sorted_.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return values_[a] < values_[b];
                   });
}

Domain Domain::Integers(std::int64_t first, std::int64_t last) {
  std::vector<Value> values;
  for (std::int64_t v = first; v <= last; ++v) values.emplace_back(v);
  return Domain(std::move(values));
}

std::optional<std::size_t> Domain::IndexOf(const Value& v) const {
  auto it = std::lower_bound(
      sorted_.begin(), sorted_.end(), v,
      [&](std::uint32_t idx, const Value& x) { return values_[idx] < x; });
  if (it == sorted_.end() || !(values_[*it] == v)) return std::nullopt;
  return *it;
}

std::optional<Value> Domain::FirstDuplicate() const {
  for (std::size_t i = 1; i < sorted_.size(); ++i) {
    if (values_[sorted_[i - 1]] == values_[sorted_[i]]) {
      return values_[sorted_[i]];
    }
  }
  return std::nullopt;
}

}  // namespace sbn
