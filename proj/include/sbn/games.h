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

// Built-in games.
//
// NoCount: a length n is drawn from a truncated exponential (node a), then a
// uniform bit string of that length (node b). Player 0 guesses the number of
// ones (node x) from a family of constant guesses and wins 1 if right.
//
// TwoPlayerNoCount: as NoCount with a second guesser y whose family also
// contains "counter", which reads b and answers its popcount. A correct
// guess wins 1; two correct guesses split it.
//
// LetsPlay: a skew-symmetric matrix game g is drawn from a weighted pool
// (node G); players A and B each pick a mixed strategy for g (nodes S_a,
// S_b) and A receives g[i][j], B the negation.

#ifndef SBN_GAMES_H_
#define SBN_GAMES_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sbn/graph.h"
#include "sbn/solver.h"
#include "sbn/value.h"

namespace sbn {

struct GameBundle {
  std::shared_ptr<const SbnGraph> graph;
  // Family name -> what it stands for.
  std::map<std::string, std::string> notes;
};

inline constexpr int kDefaultNMaxCap = 20;

struct TruncationOptions {
  double tail_tol = 1e-6;
  int n_max_cap = kDefaultNMaxCap;
  // When the cap binds: false throws CapacityError, true truncates at the
  // cap and reports the larger tail in `tail_mass`.
  bool clamp = false;
};

// Length distribution over {1..n_max}. pmf[k-1] is the exponential mass on
// (k-1, k], renormalized after cutting the tail beyond n_max.
struct TruncatedExponential {
  double lambda = 0.0;  // 0 for hand-built fixtures
  int n_max = 0;
  std::vector<double> pmf;
  double tail_mass = 0.0;  // mass removed before renormalizing

  // Throws ContractError unless lambda > 0 and 0 < tail_tol < 1.
  static TruncatedExponential Make(double lambda,
                                   const TruncationOptions& options = {});
  // Fixture: all mass on length n.
  static TruncatedExponential PointMass(int n);
  // Fixture: explicit pmf over {1..pmf.size()}; must sum to 1 within 1e-12.
  static TruncatedExponential FromPmf(std::vector<double> pmf);
};

// Bit strings of length 1..n_max, by length then lexicographically.
std::vector<std::string> BitStrings(int n_max);

// g_max < 0 means n_max. Throws ContractError if 0 <= g_max < n_max.
GameBundle MakeNoCount(const TruncatedExponential& length, int g_max = -1);
GameBundle MakeNoCount(double lambda, const TruncationOptions& options = {},
                       int g_max = -1);

struct ConstantGuessTable {
  int g_star = 0;
  double win_prob = 0.0;
  std::vector<double> table;  // indexed by g = 0..g_max
};

// win(g) = sum_n pmf(n) C(n, g) / 2^n. Closed form, no enumeration.
ConstantGuessTable BestConstantGuess(const TruncatedExponential& length,
                                     int g_max = -1);
ConstantGuessTable BestConstantGuess(double lambda,
                                     const TruncationOptions& options = {},
                                     int g_max = -1);

GameBundle MakeTwoPlayerNoCount(const TruncatedExponential& length,
                                int g_max = -1);
GameBundle MakeTwoPlayerNoCount(double lambda,
                                const TruncationOptions& options = {},
                                int g_max = -1);

inline constexpr char kCounter[] = "counter";
std::string ConstantLabel(int g);

struct SkewSymmetricGame {
  int n = 0;
  int decimals = 0;
  std::vector<std::vector<FixedPoint>> entries;

  Matrix ToMatrix() const;
  // Throws ContractError unless square and entries[i][j] == -entries[j][i].
  static SkewSymmetricGame FromFixed(std::vector<std::vector<FixedPoint>> m);
  static SkewSymmetricGame FromMatrix(const Matrix& m);
};

// Standard normal draws for i < j in row-major order from SplitMix64(seed),
// rounded half away from zero to `decimals` places.
SkewSymmetricGame GenSkewSymmetric(int n, int decimals, std::uint64_t seed);

// Member names: "lp-nash", "uniform", "pure-K" (K >= 0), "br-to-uniform".
inline constexpr char kLpNash[] = "lp-nash";
bool IsBuiltinMember(const std::string& label);
// Mixed strategy of a family member on game g. Throws ContractError for
// unknown names.
MixedStrategy MemberStrategy(const std::string& label,
                             const SkewSymmetricGame& g);

// B's loss from playing q instead of a best response against lp-nash(g):
// max_j (g m)_j - q^T g m, where m = lp-nash(g).
double ResponseGap(const SkewSymmetricGame& g, const MixedStrategy& q);
inline constexpr double kResponseGapTolerance = 1e-9;

// Throws ContractError for mismatched weights, a_members missing lp-nash or
// b_members containing it.
GameBundle MakeLetsPlay(const std::vector<SkewSymmetricGame>& subgames,
                        const std::vector<double>& weights,
                        const std::vector<std::string>& a_members,
                        const std::vector<std::string>& b_members);

}  // namespace sbn

#endif  // SBN_GAMES_H_
