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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "sbn/bound_network.h"
#include "sbn/error.h"
#include "sbn/games.h"
#include "sbn/inference.h"
#include "sbn/rng.h"
#include "sbn/solver.h"
#include "test_util.h"

namespace sbn {
namespace {

const Matrix kRps = {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}};
const Matrix kDominant = {{0, 1}, {-1, 0}};

Matrix RandomMatrix(SplitMix64& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, std::vector<double>(cols));
  for (auto& row : m) {
    for (double& x : row) x = std::round(rng.Normal() * 100) / 100;
  }
  return m;
}

double RowPayoff(const Matrix& a, const MixedStrategy& x, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += x[i] * a[i][j];
  return s;
}

double ColPayoff(const Matrix& a, std::size_t i, const MixedStrategy& y) {
  double s = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) s += a[i][j] * y[j];
  return s;
}

void CheckDistribution(const MixedStrategy& x) {
  for (double p : x) CHECK(p >= -1e-12);
  CHECK(std::accumulate(x.begin(), x.end(), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("induced normal form of two-player NoCount at length 2") {
  GameBundle tp = MakeTwoPlayerNoCount(TruncatedExponential::PointMass(2));
  NormalFormGame game = InducedNormalForm(tp.graph, kDefaultMaxSupport);
  REQUIRE(game.shape() == std::vector<std::size_t>{3, 4});
  const auto& xs = game.pure_strategies()[0];
  const auto& ys = game.pure_strategies()[1];
  const auto& xf = tp.graph->node("x").family;
  const auto& yf = tp.graph->node("y").family;
  std::size_t i = 0, j = 0;
  for (; i < xs.size(); ++i) {
    if (xs[i][0].second == *xf.IndexOf(ConstantLabel(1))) break;
  }
  for (; j < ys.size(); ++j) {
    if (ys[j][0].second == *yf.IndexOf(kCounter)) break;
  }
  std::vector<std::size_t> joint{i, j};
  CHECK(game.payoff(joint)[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(game.payoff(joint)[1] == doctest::Approx(0.75).epsilon(1e-12));

  // Spot re-computation of every entry through bind + inference.
  for (std::size_t f = 0; f < game.num_profiles(); ++f) {
    auto jt = game.JointIndex(f);
    auto direct = ExactExpectedPayoffs(Bind(tp.graph, ProfileOf(game, jt)),
                                       kDefaultMaxSupport);
    CHECK(direct == game.payoff(f));
  }
  NormalFormGame again = InducedNormalForm(tp.graph, kDefaultMaxSupport, 3);
  for (std::size_t f = 0; f < game.num_profiles(); ++f) {
    CHECK(again.payoff(f) == game.payoff(f));
  }
}

TEST_CASE("induced normal form of one-player NoCount is P(sum = g)") {
  const std::vector<double> pmf = {0.5, 0.3, 0.2};
  std::vector<double> oracle(4, 0.0);
  for (int n = 1; n <= 3; ++n) {
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
      oracle[std::popcount(s)] += pmf[n - 1] / (1 << n);
    }
  }
  GameBundle nc = MakeNoCount(TruncatedExponential::FromPmf(pmf));
  NormalFormGame game = InducedNormalForm(nc.graph, kDefaultMaxSupport);
  REQUIRE(game.n_players() == 1);
  REQUIRE(game.shape() == std::vector<std::size_t>{4});
  const auto& family = nc.graph->node("x").family;
  for (int g = 0; g <= 3; ++g) {
    std::size_t k = *family.IndexOf(ConstantLabel(g));
    CHECK(game.payoff(k)[0] == doctest::Approx(oracle[g]).epsilon(1e-12));
  }
}

TEST_CASE("induced normal form without chance copies the payoff table") {
  auto g = testing::TwoNodeGraph(0, 1);
  NormalFormGame game = InducedNormalForm(g, kDefaultMaxSupport);
  REQUIRE(game.shape() == std::vector<std::size_t>{2, 2});
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t s = 0; s < 2; ++s) {
      std::vector<std::size_t> joint{r, s};
      CHECK(game.payoff(joint)[0] == double(r + s));
      CHECK(game.payoff(joint)[1] == 0.0);
    }
  }
  CHECK(ToString(game.pure_strategies()[0][1]).find("r") !=
        std::string::npos);
}

TEST_CASE("induced normal form groups one player's nodes") {
  auto g = testing::TwoNodeGraph(0, 0);
  NormalFormGame game = InducedNormalForm(g, kDefaultMaxSupport);
  REQUIRE(game.shape() == std::vector<std::size_t>{4});
  for (std::size_t k = 0; k < 4; ++k) {
    const PureStrategyLabel& label = game.pure_strategies()[0][k];
    REQUIRE(label.size() == 2);
    CHECK(label[0].first == "r");
    CHECK(label[0].second == k / 2);
    CHECK(game.payoff(k)[0] == double(k / 2 + k % 2));
  }
}

TEST_CASE("best response examples") {
  NormalFormGame rps = NormalFormGame::ZeroSum(kRps);
  MixedStrategy uniform(3, 1.0 / 3);
  BestResponseResult br = BestResponse(rps, 0, {{}, uniform});
  CHECK(br.indices == std::vector<std::size_t>{0, 1, 2});
  CHECK(br.value == doctest::Approx(0.0));

  NormalFormGame dom = NormalFormGame::ZeroSum(kDominant);
  for (double p : {0.0, 0.25, 0.5, 0.9}) {
    br = BestResponse(dom, 0, {{}, {p, 1 - p}});
    CHECK(br.indices == std::vector<std::size_t>{0});
    CHECK(br.value == doctest::Approx(1 - p).epsilon(1e-12));
  }

  SplitMix64 rng(4);
  Matrix a = RandomMatrix(rng, 4, 3), b = RandomMatrix(rng, 4, 3);
  NormalFormGame game = NormalFormGame::Bimatrix(a, b);
  for (std::size_t j = 0; j < 3; ++j) {
    MixedStrategy col(3, 0.0);
    col[j] = 1.0;
    br = BestResponse(game, 0, {{}, col});
    double best = a[0][j];
    for (std::size_t i = 0; i < 4; ++i) best = std::max(best, a[i][j]);
    CHECK(br.value == best);
    CHECK(a[br.indices.front()][j] == best);
  }
}

TEST_CASE("epsilon-Nash check examples") {
  NormalFormGame rps = NormalFormGame::ZeroSum(kRps);
  MixedStrategy uniform(3, 1.0 / 3);
  NashCheck c = EpsilonNashCheck(rps, {uniform, uniform}, 1e-9);
  CHECK(c.is_nash);
  CHECK(c.max_regret <= 1e-9);

  c = EpsilonNashCheck(rps, {{1, 0, 0}, uniform}, 1e-9);
  CHECK_FALSE(c.is_nash);
  CHECK(c.regrets[0] == doctest::Approx(0.0));
  CHECK(c.regrets[1] == doctest::Approx(1.0));
  CHECK(c.max_regret == doctest::Approx(1.0));

  NormalFormGame one = NormalFormGame::Bimatrix({{3}}, {{-2}});
  CHECK(EpsilonNashCheck(one, {{1}, {1}}, 0.0).is_nash);
}

TEST_CASE("zero-sum examples") {
  ZeroSumSolution s = ZeroSumSolve(kRps);
  CHECK(std::abs(s.value) <= 1e-9);
  for (double p : s.strategy) CHECK(p == doctest::Approx(1.0 / 3));

  s = ZeroSumSolve(kDominant);
  CHECK(std::abs(s.value) <= 1e-9);
  CHECK(s.strategy[0] == doctest::Approx(1.0));
  CHECK(s.strategy[1] == doctest::Approx(0.0));

  // Matching pennies scaled and shifted: value 1, uniform.
  s = ZeroSumSolve({{3, -1}, {-1, 3}});
  CHECK(s.value == doctest::Approx(1.0));
  CHECK(s.strategy[0] == doctest::Approx(0.5));

  CHECK_THROWS_AS(ZeroSumSolve({}), ContractError);
  CHECK_THROWS_AS(ZeroSumSolve({{1, 2}, {3}}), ContractError);
}

TEST_CASE("zero-sum LP duality and certificates on arbitrary matrices") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t rows = rng.UniformInt(1, 7), cols = rng.UniformInt(1, 7);
    Matrix a = RandomMatrix(rng, rows, cols);
    ZeroSumSolution s = ZeroSumSolve(a);
    CheckDistribution(s.strategy);
    CheckDistribution(s.column_strategy);
    CHECK(s.duality_gap <= kDualityGapTolerance);
    // Guarantee of x: min_j x^T A e_j. Guarantee of y: max_i e_i^T A y.
    double row_guarantee = RowPayoff(a, s.strategy, 0);
    for (std::size_t j = 0; j < cols; ++j) {
      row_guarantee = std::min(row_guarantee, RowPayoff(a, s.strategy, j));
      CHECK(s.certificate[j] ==
            doctest::Approx(-RowPayoff(a, s.strategy, j)).epsilon(1e-12));
      CHECK(s.certificate[j] <= -s.value + 1e-7);
    }
    double col_guarantee = ColPayoff(a, 0, s.column_strategy);
    for (std::size_t i = 0; i < rows; ++i) {
      col_guarantee = std::max(col_guarantee, ColPayoff(a, i, s.column_strategy));
    }
    CHECK(std::abs(row_guarantee - s.value) <= 1e-7);
    CHECK(std::abs(col_guarantee - s.value) <= 1e-7);
  }
}

TEST_CASE("symmetric Nash of skew-symmetric matrices") {
  for (double p : SymmetricNashSkew(kRps)) CHECK(p == doctest::Approx(1.0 / 3));
  CHECK(SymmetricNashSkew({{0}}) == MixedStrategy{1.0});
  CHECK_THROWS_AS(SymmetricNashSkew({{0, 1}, {1, 0}}), ContractError);

  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    int n = 2 + static_cast<int>(seed % 7);
    Matrix a = GenSkewSymmetric(n, 2, seed).ToMatrix();
    ZeroSumSolution s = ZeroSumSolve(a);
    CHECK(std::abs(s.value) <= 1e-7);
    MixedStrategy m = SymmetricNashSkew(a);
    CheckDistribution(m);
    // No pure strategy gains against m.
    for (int i = 0; i < n; ++i) CHECK(ColPayoff(a, i, m) <= 1e-7);
    double mam = 0.0;
    for (int i = 0; i < n; ++i) mam += m[i] * ColPayoff(a, i, m);
    CHECK(std::abs(mam) <= 1e-9);
    NashCheck c = EpsilonNashCheck(NormalFormGame::ZeroSum(a), {m, m}, 1e-7);
    CHECK_MESSAGE(c.is_nash, "seed ", seed, " regret ", c.max_regret);
  }
}

TEST_CASE("support enumeration examples") {
  SupportEnumerationResult r =
      SupportEnumeration2p(NormalFormGame::ZeroSum(kRps));
  REQUIRE(r.equilibria.size() == 1);
  for (double p : r.equilibria[0].first) CHECK(p == doctest::Approx(1.0 / 3));
  for (double p : r.equilibria[0].second) CHECK(p == doctest::Approx(1.0 / 3));

  Matrix eye = {{1, 0}, {0, 1}};
  r = SupportEnumeration2p(NormalFormGame::Bimatrix(eye, eye));
  REQUIRE(r.equilibria.size() == 3);
  int pure = 0, mixed = 0;
  for (const auto& [x, y] : r.equilibria) {
    if (x[0] == doctest::Approx(0.5) && y[0] == doctest::Approx(0.5)) {
      ++mixed;
    } else if ((x[0] == 1.0 && y[0] == 1.0) || (x[1] == 1.0 && y[1] == 1.0)) {
      ++pure;
    }
  }
  CHECK(pure == 2);
  CHECK(mixed == 1);

  r = SupportEnumeration2p(NormalFormGame::Bimatrix({{5}}, {{7}}));
  REQUIRE(r.equilibria.size() == 1);
  CHECK(r.equilibria[0].first == MixedStrategy{1.0});

  Matrix big(9, std::vector<double>(2, 0.0));
  CHECK_THROWS_AS(SupportEnumeration2p(NormalFormGame::ZeroSum(big)),
                  CapacityError);
}

TEST_CASE("every enumerated equilibrium passes the Nash check") {
  SplitMix64 rng(7);
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t rows = rng.UniformInt(1, 4), cols = rng.UniformInt(1, 4);
    NormalFormGame game = NormalFormGame::Bimatrix(
        RandomMatrix(rng, rows, cols), RandomMatrix(rng, rows, cols));
    SupportEnumerationResult r = SupportEnumeration2p(game);
    for (const auto& [x, y] : r.equilibria) {
      ++found;
      CheckDistribution(x);
      CheckDistribution(y);
      CHECK(EpsilonNashCheck(game, {x, y}, 1e-6).is_nash);
    }
  }
  CHECK(found >= 100);
}

TEST_CASE("matrix JSON round trip and errors") {
  Matrix m = ParseMatrixJson("[[0, -1.5], [1.5, 0]]");
  CHECK(m == Matrix{{0, -1.5}, {1.5, 0}});
  CHECK(ParseMatrixJson(MatrixToJson(m).dump()) == m);
  CHECK_THROWS_AS(ParseMatrixJson("[[1, 2], [3]]"), ParseError);
  CHECK_THROWS_AS(ParseMatrixJson("[[1, \"a\"]]"), ParseError);
  CHECK_THROWS_AS(ParseMatrixJson("[[1, 2]"), ParseError);
  auto j = SolutionToJson(ZeroSumSolve(kRps));
  CHECK(j.contains("value"));
  CHECK(j["strategy"].size() == 3);
  CHECK(j["certificate"].size() == 3);
}

}  // namespace
}  // namespace sbn
