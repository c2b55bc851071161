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

// Normal-form games: the game induced by an SBN, best responses, regret
// checks, zero-sum LP and a support-enumeration audit for 2-player games.
// Ties always go to the lowest index.

#ifndef SBN_SOLVER_H_
#define SBN_SOLVER_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sbn/graph.h"

namespace sbn {

inline constexpr double kLpTolerance = 1e-9;
inline constexpr double kDualityGapTolerance = 1e-7;
inline constexpr double kNashRegretTolerance = 1e-7;
inline constexpr double kEquilibriumDedupTolerance = 1e-6;
inline constexpr double kSupportFeasibilityTolerance = 1e-8;

using Matrix = std::vector<std::vector<double>>;
using MixedStrategy = std::vector<double>;

// One pure strategy of a player: an action for each node it owns.
using PureStrategyLabel = std::vector<std::pair<NodeId, std::size_t>>;

class NormalFormGame {
 public:
  NormalFormGame() = default;
  // Labels per player; the tensor starts zero-filled.
  NormalFormGame(int n_players,
                 std::vector<std::vector<PureStrategyLabel>> pure_strategies);

  // Bimatrix with row payoffs `a` and column payoffs `b`; labels are empty.
  static NormalFormGame Bimatrix(const Matrix& a, const Matrix& b);
  // Row payoffs `a`, column payoffs -a.
  static NormalFormGame ZeroSum(const Matrix& a);

  int n_players() const { return n_players_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  const std::vector<std::vector<PureStrategyLabel>>& pure_strategies() const {
    return pure_strategies_;
  }
  std::size_t num_profiles() const { return payoffs_.size(); }

  // Joint index: player 0 varies slowest.
  std::size_t FlatIndex(std::span<const std::size_t> joint) const;
  std::vector<std::size_t> JointIndex(std::size_t flat) const;

  const std::vector<double>& payoff(std::size_t flat) const {
    return payoffs_[flat];
  }
  std::vector<double>& mutable_payoff(std::size_t flat) {
    return payoffs_[flat];
  }
  const std::vector<double>& payoff(
      std::span<const std::size_t> joint) const {
    return payoffs_[FlatIndex(joint)];
  }

  // Player p's payoff matrix for a 2-player game.
  Matrix PlayerMatrix(int player) const;

 private:
  int n_players_ = 0;
  std::vector<std::vector<PureStrategyLabel>> pure_strategies_;
  std::vector<std::size_t> shape_;
  std::vector<std::vector<double>> payoffs_;
};

std::string ToString(const PureStrategyLabel& label);

// Translates one pure strategy index per player into a StrategyProfile.
StrategyProfile ProfileOf(const NormalFormGame& game,
                          std::span<const std::size_t> joint);

// Each player's pure strategies are the cross product of the families of
// the nodes it owns (ids sorted, first id slowest); each entry is the exact
// expected payoff of the bound network. Results do not depend on `workers`.
NormalFormGame InducedNormalForm(const std::shared_ptr<const SbnGraph>& graph,
                                 std::size_t max_support, int workers = 1);

// Expected payoff per player under independent mixed strategies.
std::vector<double> ExpectedPayoffs(const NormalFormGame& game,
                                    const std::vector<MixedStrategy>& profile);

struct BestResponseResult {
  std::vector<std::size_t> indices;  // every maximizer, ascending
  double value = 0.0;
};

// `profile[player]` is ignored.
BestResponseResult BestResponse(const NormalFormGame& game, int player,
                                const std::vector<MixedStrategy>& profile);

struct NashCheck {
  bool is_nash = false;
  double max_regret = 0.0;
  std::vector<double> regrets;  // per player
};

NashCheck EpsilonNashCheck(const NormalFormGame& game,
                           const std::vector<MixedStrategy>& profile,
                           double eps);

struct ZeroSumSolution {
  double value = 0.0;              // row player's guaranteed payoff
  MixedStrategy strategy;          // row player's maximin strategy
  // Opponent's payoff from each column against `strategy`: -(x^T A)_j.
  // Every entry is at most -value (+1e-7).
  std::vector<double> certificate;
  MixedStrategy column_strategy;
  double column_value = 0.0;       // value from the column player's LP
  double duality_gap = 0.0;
};

// Dense tableau simplex with Bland's rule on the shifted matrix. Throws
// ContractError for empty or ragged input and InternalError if the two LPs
// disagree by more than kDualityGapTolerance.
ZeroSumSolution ZeroSumSolve(const Matrix& a);

// Symmetric equilibrium strategy of A = -A^T. Throws ContractError if the
// matrix is not skew-symmetric within 1e-12.
MixedStrategy SymmetricNashSkew(const Matrix& a);

struct SupportEnumerationResult {
  std::vector<std::pair<MixedStrategy, MixedStrategy>> equilibria;
  std::size_t degenerate_supports = 0;  // singular systems skipped
};

// Equal-size support pairs only. Throws ContractError unless the game has 2
// players and CapacityError if either side has more than `max_size`
// strategies.
SupportEnumerationResult SupportEnumeration2p(const NormalFormGame& game,
                                              std::size_t max_size = 8);

// JSON array of equal-length numeric arrays. Throws ParseError.
Matrix ParseMatrixJson(std::string_view text);
nlohmann::ordered_json MatrixToJson(const Matrix& m);
nlohmann::ordered_json SolutionToJson(const ZeroSumSolution& solution);

}  // namespace sbn

#endif  // SBN_SOLVER_H_
