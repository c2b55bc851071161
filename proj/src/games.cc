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

#include "sbn/games.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "sbn/error.h"
#include "sbn/rng.h"

namespace sbn {

TruncatedExponential TruncatedExponential::Make(
    double lambda, const TruncationOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ContractError("lambda must be positive");
  }
  const double tol = options.tail_tol;
  if (!(tol > 0.0 && tol < 1.0)) {
    throw ContractError("tail_tol must lie in (0, 1)");
  }
  if (options.n_max_cap < 1) throw ContractError("n_max cap must be >= 1");
  // Smallest k with exp(-lambda k) <= tol.
  double guess = std::ceil(-std::log(tol) / lambda);
  long long k = std::max(1LL, static_cast<long long>(guess));
  while (k > 1 && std::exp(-lambda * static_cast<double>(k - 1)) <= tol) --k;
  while (std::exp(-lambda * static_cast<double>(k)) > tol) ++k;
  if (k > options.n_max_cap) {
    if (!options.clamp) {
      throw CapacityError("tail_tol=" + std::to_string(tol) + " at lambda=" +
                          std::to_string(lambda) + " needs n_max=" +
                          std::to_string(k) + ", above the cap of " +
                          std::to_string(options.n_max_cap));
    }
    k = options.n_max_cap;
  }
  TruncatedExponential d;
  d.lambda = lambda;
  d.n_max = static_cast<int>(k);
  d.tail_mass = std::exp(-lambda * static_cast<double>(k));
  const double kept = -std::expm1(-lambda * static_cast<double>(k));
  const double step = -std::expm1(-lambda);
  d.pmf.resize(k);
  for (long long i = 0; i < k; ++i) {
    d.pmf[i] = std::exp(-lambda * static_cast<double>(i)) * step / kept;
  }
  return d;
}

TruncatedExponential TruncatedExponential::PointMass(int n) {
  if (n < 1) throw ContractError("length must be >= 1");
  std::vector<double> pmf(n, 0.0);
  pmf[n - 1] = 1.0;
  return FromPmf(std::move(pmf));
}

TruncatedExponential TruncatedExponential::FromPmf(std::vector<double> pmf) {
  if (pmf.empty()) throw ContractError("empty length pmf");
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0)) throw ContractError("negative length probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    throw ContractError("length pmf does not sum to 1");
  }
  TruncatedExponential d;
  d.n_max = static_cast<int>(pmf.size());
  d.pmf = std::move(pmf);
  return d;
}

std::vector<std::string> BitStrings(int n_max) {
  std::vector<std::string> out;
  for (int n = 1; n <= n_max; ++n) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
      std::string s(n, '0');
      for (int b = 0; b < n; ++b) {
        if ((i >> (n - 1 - b)) & 1) s[b] = '1';
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string ConstantLabel(int g) { return "constant-" + std::to_string(g); }

namespace {

constexpr int kMaxStringLength = 24;

int ResolveGMax(int n_max, int g_max) {
  if (g_max < 0) return n_max;
  if (g_max < n_max) {
    throw ContractError("g_max=" + std::to_string(g_max) +
                        " is below n_max=" + std::to_string(n_max));
  }
  return g_max;
}

struct BitTable {
  // offset[n]: domain index of the first string of length n.
  std::vector<std::uint32_t> offset;
  std::vector<std::uint8_t> popcount;
};

std::shared_ptr<const BitTable> MakeBitTable(int n_max) {
  if (n_max > kMaxStringLength) {
    throw CapacityError("string length " + std::to_string(n_max) +
                        " is too large to enumerate");
  }
  auto t = std::make_shared<BitTable>();
  t->offset.assign(n_max + 2, 0);
  for (int n = 1; n <= n_max; ++n) {
    t->offset[n + 1] = t->offset[n] + (std::uint32_t{1} << n);
    for (std::uint32_t i = 0; i < (std::uint32_t{1} << n); ++i) {
      t->popcount.push_back(static_cast<std::uint8_t>(std::popcount(i)));
    }
  }
  return t;
}

Cpd ConstantCpd(std::size_t g) {
  return Cpd::FromRule({"b"}, ConstantLabel(static_cast<int>(g)), 1,
                       [g](std::span<const std::uint32_t>,
                           std::vector<Outcome>& out) {
                         out.push_back({static_cast<std::uint32_t>(g), 1.0});
                       });
}

PayoffVector Pay(std::initializer_list<FixedPoint> values) {
  return PayoffVector(values);
}

// Nodes a and b plus the constant guesser x, shared by both NoCount games.
SbnGraph NoCountBase(int n_players, const TruncatedExponential& length,
                     int g_max, const std::shared_ptr<const BitTable>& bits) {
  const int n_max = length.n_max;
  SbnGraph graph(n_players);

  Node a;
  a.id = "a";
  a.kind = NodeKind::kChance;
  a.domain = Domain::Integers(1, n_max);
  a.cpd = Cpd::Prior(length.pmf);
  graph.AddNode(std::move(a));

  Node b;
  b.id = "b";
  b.kind = NodeKind::kChance;
  std::vector<Value> strings;
  for (auto& s : BitStrings(n_max)) strings.emplace_back(std::move(s));
  b.domain = Domain(std::move(strings));
  b.parents = {"a"};
  b.cpd = Cpd::FromRule(
      {"a"}, "uniform-bits", std::size_t{1} << n_max,
      [bits](std::span<const std::uint32_t> parents,
             std::vector<Outcome>& out) {
        const int n = static_cast<int>(parents[0]) + 1;
        const double p = std::ldexp(1.0, -n);
        const std::uint32_t first = bits->offset[n];
        for (std::uint32_t i = 0; i < (std::uint32_t{1} << n); ++i) {
          out.push_back({first + i, p});
        }
      });
  graph.AddNode(std::move(b));

  Node x;
  x.id = "x";
  x.kind = NodeKind::kStrategic;
  x.owner = 0;
  x.domain = Domain::Integers(0, g_max);
  x.parents = {"b"};
  x.family.name = "constants";
  x.family.deterministic = true;
  for (int g = 0; g <= g_max; ++g) {
    x.family.strategies.push_back({ConstantLabel(g), ConstantCpd(g)});
  }
  graph.AddNode(std::move(x));
  return graph;
}

const char kConstantsNote[] =
    "stand-in for O(1) strategies: a fixed guess that never reads b";
const char kCounterNote[] =
    "stand-in for O(n) strategies: the constants plus 'counter', which reads "
    "all of b and answers its number of ones";

}  // namespace

GameBundle MakeNoCount(const TruncatedExponential& length, int g_max) {
  g_max = ResolveGMax(length.n_max, g_max);
  auto bits = MakeBitTable(length.n_max);
  SbnGraph graph = NoCountBase(1, length, g_max, bits);

  Node pi;
  pi.id = "pi";
  pi.kind = NodeKind::kPayoff;
  pi.owner = kAllPlayers;
  pi.domain = Domain({Pay({FixedPoint(0, 0)}), Pay({FixedPoint(1, 0)})});
  pi.parents = {"b", "x"};
  pi.cpd = Cpd::FromRule({"b", "x"}, "guess-matches-popcount", 1,
                         [bits](std::span<const std::uint32_t> v,
                                std::vector<Outcome>& out) {
                           bool hit = bits->popcount[v[0]] == v[1];
                           out.push_back({hit ? 1u : 0u, 1.0});
                         });
  graph.AddNode(std::move(pi));

  GameBundle bundle;
  bundle.graph = std::make_shared<const SbnGraph>(std::move(graph));
  bundle.notes["constants"] = kConstantsNote;
  return bundle;
}

GameBundle MakeNoCount(double lambda, const TruncationOptions& options,
                       int g_max) {
  return MakeNoCount(TruncatedExponential::Make(lambda, options), g_max);
}

namespace {

std::uint64_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * static_cast<std::uint64_t>(n - i) / (i + 1);
  return c;
}

}  // namespace

ConstantGuessTable BestConstantGuess(const TruncatedExponential& length,
                                     int g_max) {
  g_max = ResolveGMax(length.n_max, g_max);
  if (length.n_max > 62) {
    throw CapacityError("binomial table limited to n_max <= 62");
  }
  ConstantGuessTable result;
  result.table.assign(g_max + 1, 0.0);
  for (int g = 0; g <= g_max; ++g) {
    double win = 0.0;
    for (int n = 1; n <= length.n_max; ++n) {
      double share = std::ldexp(static_cast<double>(Binomial(n, g)), -n);
      win += length.pmf[n - 1] * share;
    }
    result.table[g] = win;
    if (win > result.win_prob || g == 0) {
      result.win_prob = win;
      result.g_star = g;
    }
  }
  return result;
}

ConstantGuessTable BestConstantGuess(double lambda,
                                     const TruncationOptions& options,
                                     int g_max) {
  return BestConstantGuess(TruncatedExponential::Make(lambda, options), g_max);
}

GameBundle MakeTwoPlayerNoCount(const TruncatedExponential& length,
                                int g_max) {
  g_max = ResolveGMax(length.n_max, g_max);
  auto bits = MakeBitTable(length.n_max);
  SbnGraph graph = NoCountBase(2, length, g_max, bits);

  Node y;
  y.id = "y";
  y.kind = NodeKind::kStrategic;
  y.owner = 1;
  y.domain = Domain::Integers(0, g_max);
  y.parents = {"b"};
  y.family.name = "constants+counter";
  y.family.deterministic = true;
  for (int g = 0; g <= g_max; ++g) {
    y.family.strategies.push_back({ConstantLabel(g), ConstantCpd(g)});
  }
  y.family.strategies.push_back(
      {kCounter, Cpd::FromRule({"b"}, kCounter, 1,
                               [bits](std::span<const std::uint32_t> v,
                                      std::vector<Outcome>& out) {
                                 out.push_back({bits->popcount[v[0]], 1.0});
                               })});
  graph.AddNode(std::move(y));

  const FixedPoint zero(0, 0), one(1, 0), half(5, 1);
  Node pi;
  pi.id = "pi";
  pi.kind = NodeKind::kPayoff;
  pi.owner = kAllPlayers;
  pi.domain = Domain({Pay({zero, zero}), Pay({one, zero}), Pay({zero, one}),
                      Pay({half, half})});
  pi.parents = {"b", "x", "y"};
  pi.cpd = Cpd::FromRule({"b", "x", "y"}, "split-prize", 1,
                         [bits](std::span<const std::uint32_t> v,
                                std::vector<Outcome>& out) {
                           const std::uint32_t c = bits->popcount[v[0]];
                           const bool hx = v[1] == c;
                           const bool hy = v[2] == c;
                           std::uint32_t idx = hx && hy ? 3 : hx ? 1 : hy ? 2 : 0;
                           out.push_back({idx, 1.0});
                         });
  graph.AddNode(std::move(pi));

  GameBundle bundle;
  bundle.graph = std::make_shared<const SbnGraph>(std::move(graph));
  bundle.notes["constants"] = kConstantsNote;
  bundle.notes["constants+counter"] = kCounterNote;
  return bundle;
}

GameBundle MakeTwoPlayerNoCount(double lambda,
                                const TruncationOptions& options, int g_max) {
  return MakeTwoPlayerNoCount(TruncatedExponential::Make(lambda, options),
                              g_max);
}

Matrix SkewSymmetricGame::ToMatrix() const {
  Matrix m(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = entries[i][j].ToDouble();
  }
  return m;
}

SkewSymmetricGame SkewSymmetricGame::FromFixed(
    std::vector<std::vector<FixedPoint>> m) {
  const std::size_t n = m.size();
  if (n == 0) throw ContractError("empty subgame matrix");
  SkewSymmetricGame g;
  g.n = static_cast<int>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw ContractError("subgame matrix is not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const FixedPoint& a = m[i][j];
      const FixedPoint& b = m[j][i];
      if (a.units() != -b.units() || a.decimals() != b.decimals()) {
        throw ContractError("subgame matrix is not skew-symmetric at (" +
                            std::to_string(i) + ", " + std::to_string(j) +
                            ")");
      }
      g.decimals = std::max(g.decimals, a.decimals());
    }
  }
  g.entries = std::move(m);
  return g;
}

SkewSymmetricGame SkewSymmetricGame::FromMatrix(const Matrix& m) {
  std::vector<std::vector<FixedPoint>> f(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (double v : m[i]) f[i].push_back(FixedPoint::FromDouble(v));
  }
  return FromFixed(std::move(f));
}

SkewSymmetricGame GenSkewSymmetric(int n, int decimals, std::uint64_t seed) {
  if (n < 1) throw ContractError("subgame size must be >= 1");
  if (decimals < 0 || decimals > FixedPoint::kMaxDecimals) {
    throw ContractError("decimals must lie in [0, " +
                        std::to_string(FixedPoint::kMaxDecimals) + "]");
  }
  const double scale = std::pow(10.0, decimals);
  SplitMix64 rng(seed);
  std::vector<std::vector<FixedPoint>> m(
      n, std::vector<FixedPoint>(n, FixedPoint(0, 0)));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::int64_t units = std::llround(rng.Normal() * scale);
      m[i][j] = FixedPoint(units, decimals);
      m[j][i] = FixedPoint(-units, decimals);
    }
  }
  SkewSymmetricGame g;
  g.n = n;
  g.decimals = decimals;
  g.entries = std::move(m);
  return g;
}

namespace {

std::optional<std::size_t> PureIndex(const std::string& label) {
  constexpr std::string_view kPrefix = "pure-";
  if (label.size() <= kPrefix.size() || label.rfind(kPrefix, 0) != 0) {
    return std::nullopt;
  }
  std::size_t k = 0;
  const char* first = label.data() + kPrefix.size();
  const char* last = label.data() + label.size();
  auto [ptr, ec] = std::from_chars(first, last, k);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return k;
}

}  // namespace

bool IsBuiltinMember(const std::string& label) {
  return label == kLpNash || label == "uniform" || label == "br-to-uniform" ||
         PureIndex(label).has_value();
}

MixedStrategy MemberStrategy(const std::string& label,
                             const SkewSymmetricGame& g) {
  const std::size_t n = g.n;
  if (label == kLpNash) return SymmetricNashSkew(g.ToMatrix());
  if (label == "uniform") return MixedStrategy(n, 1.0 / static_cast<double>(n));
  if (auto k = PureIndex(label)) {
    MixedStrategy s(n, 0.0);
    s[std::min(*k, n - 1)] = 1.0;
    return s;
  }
  if (label == "br-to-uniform") {
    // Against a uniform column player, row i earns its row sum / n; compare
    // sums exactly in units of 10^-decimals.
    std::size_t best = 0;
    __int128 best_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      __int128 sum = 0;
      for (const FixedPoint& v : g.entries[i]) {
        __int128 u = v.units();
        for (int d = v.decimals(); d < g.decimals; ++d) u *= 10;
        sum += u;
      }
      if (i == 0 || sum > best_sum) {
        best = i;
        best_sum = sum;
      }
    }
    MixedStrategy s(n, 0.0);
    s[best] = 1.0;
    return s;
  }
  throw ContractError("unknown family member '" + label + "'");
}

double ResponseGap(const SkewSymmetricGame& g, const MixedStrategy& q) {
  Matrix a = g.ToMatrix();
  MixedStrategy m = SymmetricNashSkew(a);
  double best = -std::numeric_limits<double>::infinity();
  double played = 0.0;
  for (int j = 0; j < g.n; ++j) {
    double am = 0.0;
    for (int i = 0; i < g.n; ++i) am += a[j][i] * m[i];
    best = std::max(best, am);
    played += q[j] * am;
  }
  return best - played;
}

namespace {

Node StrategyNode(const std::string& id, PlayerId owner,
                  const std::string& family_name,
                  const std::vector<std::string>& members,
                  const std::vector<SkewSymmetricGame>& subgames,
                  int max_n) {
  Node node;
  node.id = id;
  node.kind = NodeKind::kStrategic;
  node.owner = owner;
  node.domain = Domain::Integers(0, max_n - 1);
  node.parents = {"G"};
  node.family.name = family_name;
  for (const std::string& label : members) {
    std::vector<Cpd::Row> rows;
    for (std::size_t k = 0; k < subgames.size(); ++k) {
      MixedStrategy s = MemberStrategy(label, subgames[k]);
      s.resize(max_n, 0.0);
      rows.push_back({{Value(static_cast<std::int64_t>(k))}, s, {}});
    }
    node.family.strategies.push_back({label, Cpd::Table({"G"}, rows)});
  }
  return node;
}

std::string MemberNote(const std::string& label) {
  if (label == kLpNash) {
    return "symmetric equilibrium from the zero-sum LP (full computational "
           "power)";
  }
  if (label == "uniform") return "uniform mix, no computation";
  if (label == "br-to-uniform") {
    return "best pure reply to a uniform opponent (one pass over the matrix)";
  }
  return "fixed pure strategy, clamped to the subgame size";
}

}  // namespace

GameBundle MakeLetsPlay(const std::vector<SkewSymmetricGame>& subgames,
                        const std::vector<double>& weights,
                        const std::vector<std::string>& a_members,
                        const std::vector<std::string>& b_members) {
  if (subgames.empty()) throw ContractError("subgame pool is empty");
  if (weights.size() != subgames.size()) {
    throw ContractError("need one weight per subgame");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ContractError("subgame weights must be >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw ContractError("subgame weights must sum to 1");
  }
  if (std::find(a_members.begin(), a_members.end(), kLpNash) ==
      a_members.end()) {
    throw ContractError("player A's family must include lp-nash");
  }
  if (std::find(b_members.begin(), b_members.end(), kLpNash) !=
      b_members.end()) {
    throw ContractError(
        "player B's family must not include lp-nash; B is restricted to "
        "cheaper strategies");
  }
  if (b_members.empty()) throw ContractError("player B's family is empty");
  for (const auto* members : {&a_members, &b_members}) {
    std::set<std::string> seen;
    for (const std::string& m : *members) {
      if (!IsBuiltinMember(m)) {
        throw ContractError("unknown family member '" + m + "'");
      }
      if (!seen.insert(m).second) {
        throw ContractError("family member '" + m + "' listed twice");
      }
    }
  }

  int max_n = 0;
  for (const auto& g : subgames) max_n = std::max(max_n, g.n);
  const std::size_t k = subgames.size();

  SbnGraph graph(2);
  Node g_node;
  g_node.id = "G";
  g_node.kind = NodeKind::kChance;
  g_node.domain = Domain::Integers(0, static_cast<std::int64_t>(k) - 1);
  g_node.cpd = Cpd::Prior(weights);
  graph.AddNode(std::move(g_node));
  graph.AddNode(StrategyNode("S_a", 0, "A", a_members, subgames, max_n));
  graph.AddNode(StrategyNode("S_b", 1, "B", b_members, subgames, max_n));

  // Distinct (v, -v) payoffs; (0, 0) covers padding cells.
  std::vector<Value> values;
  std::map<PayoffVector, std::uint32_t> index;
  auto intern = [&](const FixedPoint& v) {
    PayoffVector p = {v, FixedPoint(-v.units(), v.decimals())};
    auto [it, inserted] =
        index.emplace(p, static_cast<std::uint32_t>(values.size()));
    if (inserted) values.emplace_back(std::move(p));
    return it->second;
  };
  const std::uint32_t zero = intern(FixedPoint(0, 0));
  auto cells = std::make_shared<std::vector<std::uint32_t>>(
      k * max_n * max_n, zero);
  for (std::size_t s = 0; s < k; ++s) {
    for (int i = 0; i < subgames[s].n; ++i) {
      for (int j = 0; j < subgames[s].n; ++j) {
        (*cells)[(s * max_n + i) * max_n + j] =
            intern(subgames[s].entries[i][j]);
      }
    }
  }

  Node pi;
  pi.id = "pi";
  pi.kind = NodeKind::kPayoff;
  pi.owner = kAllPlayers;
  pi.domain = Domain(std::move(values));
  pi.parents = {"G", "S_a", "S_b"};
  const std::size_t width = max_n;
  pi.cpd = Cpd::FromRule({"G", "S_a", "S_b"}, "matrix-entry", 1,
                         [cells, width](std::span<const std::uint32_t> v,
                                        std::vector<Outcome>& out) {
                           out.push_back(
                               {(*cells)[(v[0] * width + v[1]) * width + v[2]],
                                1.0});
                         });
  graph.AddNode(std::move(pi));

  GameBundle bundle;
  bundle.graph = std::make_shared<const SbnGraph>(std::move(graph));
  for (const std::string& m : a_members) bundle.notes["A:" + m] = MemberNote(m);
  for (const std::string& m : b_members) bundle.notes["B:" + m] = MemberNote(m);
  return bundle;
}

}  // namespace sbn
