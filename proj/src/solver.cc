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

#include "sbn/solver.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "sbn/bound_network.h"
#include "sbn/error.h"
#include "sbn/inference.h"

namespace sbn {

NormalFormGame::NormalFormGame(
    int n_players, std::vector<std::vector<PureStrategyLabel>> pure_strategies)
    : n_players_(n_players), pure_strategies_(std::move(pure_strategies)) {
  if (static_cast<int>(pure_strategies_.size()) != n_players_) {
    throw ContractError("need one strategy list per player");
  }
  std::size_t total = 1;
  for (const auto& s : pure_strategies_) {
    if (s.empty()) throw ContractError("a player has no pure strategies");
    shape_.push_back(s.size());
    total *= s.size();
  }
  payoffs_.assign(total, std::vector<double>(n_players_, 0.0));
}

namespace {

void CheckRectangular(const Matrix& m, const char* what) {
  if (m.empty() || m[0].empty()) {
    throw ContractError(std::string(what) + " matrix is empty");
  }
  for (const auto& row : m) {
    if (row.size() != m[0].size()) {
      throw ContractError(std::string(what) + " matrix is ragged");
    }
  }
}

}  // namespace

NormalFormGame NormalFormGame::Bimatrix(const Matrix& a, const Matrix& b) {
  CheckRectangular(a, "row payoff");
  CheckRectangular(b, "column payoff");
  if (a.size() != b.size() || a[0].size() != b[0].size()) {
    throw ContractError("bimatrix payoff shapes differ");
  }
  NormalFormGame game(2, {std::vector<PureStrategyLabel>(a.size()),
                          std::vector<PureStrategyLabel>(a[0].size())});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[0].size(); ++j) {
      std::size_t joint[2] = {i, j};
      game.mutable_payoff(game.FlatIndex(joint)) = {a[i][j], b[i][j]};
    }
  }
  return game;
}

NormalFormGame NormalFormGame::ZeroSum(const Matrix& a) {
  Matrix b = a;
  for (auto& row : b) {
    for (double& v : row) v = -v;
  }
  return Bimatrix(a, b);
}

std::size_t NormalFormGame::FlatIndex(
    std::span<const std::size_t> joint) const {
  if (joint.size() != shape_.size()) {
    throw ContractError("joint index has the wrong number of players");
  }
  std::size_t flat = 0;
  for (std::size_t p = 0; p < shape_.size(); ++p) {
    if (joint[p] >= shape_[p]) {
      throw ContractError("pure strategy index out of range");
    }
    flat = flat * shape_[p] + joint[p];
  }
  return flat;
}

std::vector<std::size_t> NormalFormGame::JointIndex(std::size_t flat) const {
  std::vector<std::size_t> joint(shape_.size());
  for (std::size_t p = shape_.size(); p-- > 0;) {
    joint[p] = flat % shape_[p];
    flat /= shape_[p];
  }
  return joint;
}

Matrix NormalFormGame::PlayerMatrix(int player) const {
  if (n_players_ != 2) throw ContractError("payoff matrix needs 2 players");
  Matrix m(shape_[0], std::vector<double>(shape_[1]));
  for (std::size_t i = 0; i < shape_[0]; ++i) {
    for (std::size_t j = 0; j < shape_[1]; ++j) {
      m[i][j] = payoffs_[i * shape_[1] + j][player];
    }
  }
  return m;
}

std::string ToString(const PureStrategyLabel& label) {
  std::string out;
  for (const auto& [id, a] : label) {
    if (!out.empty()) out += ',';
    out += id + '=' + std::to_string(a);
  }
  return out;
}

StrategyProfile ProfileOf(const NormalFormGame& game,
                          std::span<const std::size_t> joint) {
  StrategyProfile profile;
  for (std::size_t p = 0; p < joint.size(); ++p) {
    for (const auto& [id, a] : game.pure_strategies()[p].at(joint[p])) {
      profile.choices[id] = a;
    }
  }
  return profile;
}

NormalFormGame InducedNormalForm(const std::shared_ptr<const SbnGraph>& graph,
                                 std::size_t max_support, int workers) {
  const int n = graph->n_players();
  std::vector<std::vector<NodeId>> owned(n);
  for (const NodeId& id : graph->StrategicIds()) {
    PlayerId owner = graph->node(id).owner;
    if (owner < 0 || owner >= n) {
      throw StructuralError("strategic node '" + id + "' has no valid owner");
    }
    owned[owner].push_back(id);
  }
  std::vector<std::vector<PureStrategyLabel>> labels(n);
  for (int p = 0; p < n; ++p) {
    labels[p] = {PureStrategyLabel()};
    for (const NodeId& id : owned[p]) {
      std::size_t m = graph->node(id).family.strategies.size();
      if (m == 0) {
        throw StructuralError("strategic node '" + id +
                              "' has an empty family");
      }
      std::vector<PureStrategyLabel> next;
      for (const auto& prefix : labels[p]) {
        for (std::size_t a = 0; a < m; ++a) {
          PureStrategyLabel l = prefix;
          l.emplace_back(id, a);
          next.push_back(std::move(l));
        }
      }
      labels[p] = std::move(next);
    }
  }
  NormalFormGame game(n, std::move(labels));

  auto evaluate = [&](std::size_t flat) {
    auto joint = game.JointIndex(flat);
    BoundNetwork bound = Bind(graph, ProfileOf(game, joint));
    game.mutable_payoff(flat) = ExactExpectedPayoffs(bound, max_support);
  };
  const std::size_t total = game.num_profiles();
  if (workers <= 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::size_t n_workers = std::min<std::size_t>(workers, total);
  if (n_workers <= 1) {
    for (std::size_t f = 0; f < total; ++f) evaluate(f);
    return game;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t f = w; f < total; f += n_workers) evaluate(f);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return game;
}

namespace {

void CheckProfile(const NormalFormGame& game,
                  const std::vector<MixedStrategy>& profile, int skip) {
  if (static_cast<int>(profile.size()) != game.n_players()) {
    throw ContractError("profile needs one mixed strategy per player");
  }
  for (int p = 0; p < game.n_players(); ++p) {
    if (p == skip) continue;
    if (profile[p].size() != game.shape()[p]) {
      throw ContractError("mixed strategy of player " + std::to_string(p) +
                          " has the wrong length");
    }
  }
}

}  // namespace

std::vector<double> ExpectedPayoffs(const NormalFormGame& game,
                                    const std::vector<MixedStrategy>& profile) {
  CheckProfile(game, profile, -1);
  std::vector<double> out(game.n_players(), 0.0);
  for (std::size_t f = 0; f < game.num_profiles(); ++f) {
    auto joint = game.JointIndex(f);
    double w = 1.0;
    for (int p = 0; p < game.n_players() && w != 0.0; ++p) {
      w *= profile[p][joint[p]];
    }
    if (w == 0.0) continue;
    const auto& pay = game.payoff(f);
    for (int p = 0; p < game.n_players(); ++p) out[p] += w * pay[p];
  }
  return out;
}

BestResponseResult BestResponse(const NormalFormGame& game, int player,
                                const std::vector<MixedStrategy>& profile) {
  if (player < 0 || player >= game.n_players()) {
    throw ContractError("no such player");
  }
  CheckProfile(game, profile, player);
  std::vector<double> values(game.shape()[player], 0.0);
  for (std::size_t f = 0; f < game.num_profiles(); ++f) {
    auto joint = game.JointIndex(f);
    double w = 1.0;
    for (int p = 0; p < game.n_players() && w != 0.0; ++p) {
      if (p != player) w *= profile[p][joint[p]];
    }
    if (w == 0.0) continue;
    values[joint[player]] += w * game.payoff(f)[player];
  }
  BestResponseResult result;
  result.value = *std::max_element(values.begin(), values.end());
  double tie = 1e-12 * std::max(1.0, std::abs(result.value));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= result.value - tie) result.indices.push_back(i);
  }
  return result;
}

NashCheck EpsilonNashCheck(const NormalFormGame& game,
                           const std::vector<MixedStrategy>& profile,
                           double eps) {
  std::vector<double> current = ExpectedPayoffs(game, profile);
  NashCheck check;
  for (int p = 0; p < game.n_players(); ++p) {
    double regret = BestResponse(game, p, profile).value - current[p];
    check.regrets.push_back(regret);
    check.max_regret = std::max(check.max_regret, regret);
  }
  check.is_nash = check.max_regret <= eps;
  return check;
}

namespace {

struct LpResult {
  double value = 0.0;
  MixedStrategy row;
  MixedStrategy column;
};

// Maximin of `a` for the row player. With A' = A + shift > 0, solves
// max 1^T w s.t. A' w <= 1, w >= 0; the column strategy is w / sum(w) and
// the row strategy comes from the slack reduced costs.
LpResult SolveMaximin(const Matrix& a) {
  const std::size_t m = a.size();
  const std::size_t n = a[0].size();
  double lo = a[0][0];
  for (const auto& row : a) {
    for (double v : row) lo = std::min(lo, v);
  }
  const double shift = 1.0 - lo;
  const std::size_t cols = n + m + 1;
  const std::size_t rhs = n + m;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j] + shift;
    t[i][n + i] = 1.0;
    t[i][rhs] = 1.0;
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -1.0;

  const std::size_t max_iterations = 1000 * (m + n) + 1000;
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_iterations) {
      throw InternalError("simplex did not terminate");
    }
    std::size_t enter = rhs;
    for (std::size_t j = 0; j < rhs; ++j) {
      if (t[m][j] < -kLpTolerance) {
        enter = j;
        break;
      }
    }
    if (enter == rhs) break;
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= kLpTolerance) continue;
      double ratio = t[i][rhs] / t[i][enter];
      if (leave == m || ratio < best - kLpTolerance ||
          (ratio <= best + kLpTolerance && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) throw InternalError("simplex found an unbounded ray");
    double pivot = t[leave][enter];
    for (double& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      double factor = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= factor * t[leave][j];
    }
    basis[leave] = enter;
  }

  double z = t[m][rhs];
  if (!(z > 0.0)) throw InternalError("simplex returned a non-positive value");
  LpResult result;
  result.value = 1.0 / z - shift;
  result.row.assign(m, 0.0);
  result.column.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    result.row[i] = std::max(0.0, t[m][n + i]);
    if (basis[i] < n) result.column[basis[i]] = std::max(0.0, t[i][rhs]);
  }
  for (MixedStrategy* s : {&result.row, &result.column}) {
    double sum = std::accumulate(s->begin(), s->end(), 0.0);
    if (!(sum > 0.0)) throw InternalError("simplex returned an empty strategy");
    for (double& v : *s) v /= sum;
  }
  return result;
}

}  // namespace

ZeroSumSolution ZeroSumSolve(const Matrix& a) {
  CheckRectangular(a, "zero-sum");
  for (const auto& row : a) {
    for (double v : row) {
      if (!std::isfinite(v)) throw ContractError("matrix entry is not finite");
    }
  }
  LpResult row = SolveMaximin(a);
  Matrix neg_t(a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[0].size(); ++j) neg_t[j][i] = -a[i][j];
  }
  LpResult col = SolveMaximin(neg_t);

  ZeroSumSolution s;
  s.value = row.value;
  s.strategy = row.row;
  s.column_strategy = col.row;
  s.column_value = -col.value;
  s.duality_gap = std::abs(s.value - s.column_value);
  s.certificate.assign(a[0].size(), 0.0);
  for (std::size_t j = 0; j < a[0].size(); ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) v += s.strategy[i] * a[i][j];
    s.certificate[j] = -v;
  }
  if (s.duality_gap > kDualityGapTolerance) {
    throw InternalError("zero-sum LP duality gap " +
                        std::to_string(s.duality_gap));
  }
  return s;
}

MixedStrategy SymmetricNashSkew(const Matrix& a) {
  CheckRectangular(a, "skew-symmetric");
  const std::size_t n = a.size();
  if (a[0].size() != n) throw ContractError("matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(a[i][j] + a[j][i]) > 1e-12) {
        throw ContractError("matrix is not skew-symmetric at (" +
                            std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  MixedStrategy m = ZeroSumSolve(a).strategy;
  double self = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double am = 0.0;
    for (std::size_t j = 0; j < n; ++j) am += a[i][j] * m[j];
    if (am > kNashRegretTolerance) {
      throw InternalError("symmetric strategy is beaten by pure strategy " +
                          std::to_string(i));
    }
    self += m[i] * am;
  }
  if (std::abs(self) > 1e-9) {
    throw InternalError("symmetric strategy has nonzero self-payoff");
  }
  return m;
}

namespace {

// Solves M z = r in place by Gaussian elimination with partial pivoting.
// Returns false if the system is singular.
bool Solve(std::vector<std::vector<double>> m, std::vector<double> r,
           std::vector<double>& z) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
    }
    if (std::abs(m[p][c]) < 1e-12) return false;
    std::swap(m[p], m[c]);
    std::swap(r[p], r[c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      double f = m[i][c] / m[c][c];
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      r[i] -= f * r[c];
    }
  }
  z.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = r[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * z[j];
    z[i] = s / m[i][i];
  }
  return true;
}

std::vector<std::vector<std::size_t>> Subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Mixed strategy over `support` that makes the opponent indifferent across
// `rows`: sum_s pay(r, s) z_s = v for r in rows, sum z = 1.
template <typename Pay>
bool Indifference(const std::vector<std::size_t>& rows,
                  const std::vector<std::size_t>& support, std::size_t size,
                  Pay pay, MixedStrategy& out, double& value) {
  const std::size_t k = support.size();
  std::vector<std::vector<double>> m(k + 1, std::vector<double>(k + 1, 0.0));
  std::vector<double> r(k + 1, 0.0);
  for (std::size_t e = 0; e < k; ++e) {
    for (std::size_t s = 0; s < k; ++s) m[e][s] = pay(rows[e], support[s]);
    m[e][k] = -1.0;
  }
  for (std::size_t s = 0; s < k; ++s) m[k][s] = 1.0;
  r[k] = 1.0;
  std::vector<double> z;
  if (!Solve(std::move(m), std::move(r), z)) return false;
  out.assign(size, 0.0);
  for (std::size_t s = 0; s < k; ++s) out[support[s]] = z[s];
  value = z[k];
  return true;
}

}  // namespace

SupportEnumerationResult SupportEnumeration2p(const NormalFormGame& game,
                                              std::size_t max_size) {
  if (game.n_players() != 2) {
    throw ContractError("support enumeration needs a 2-player game");
  }
  const std::size_t m = game.shape()[0];
  const std::size_t n = game.shape()[1];
  if (m > max_size || n > max_size) {
    throw CapacityError("support enumeration limited to " +
                        std::to_string(max_size) + " strategies per player");
  }
  Matrix a = game.PlayerMatrix(0);
  Matrix b = game.PlayerMatrix(1);
  const double tol = kSupportFeasibilityTolerance;
  SupportEnumerationResult result;

  auto feasible = [&](MixedStrategy& s) {
    for (double& v : s) {
      if (v < -tol) return false;
      if (v < 0.0) v = 0.0;
    }
    return true;
  };
  auto duplicate = [&](const MixedStrategy& x, const MixedStrategy& y) {
    for (const auto& [ex, ey] : result.equilibria) {
      double d = 0.0;
      for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::abs(ex[i] - x[i]));
      for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::abs(ey[j] - y[j]));
      if (d <= kEquilibriumDedupTolerance) return true;
    }
    return false;
  };

  for (std::size_t k = 1; k <= std::min(m, n); ++k) {
    auto row_sets = Subsets(m, k);
    auto col_sets = Subsets(n, k);
    for (const auto& rows : row_sets) {
      for (const auto& cols : col_sets) {
        MixedStrategy x, y;
        double u = 0.0, v = 0.0;
        bool ok_y = Indifference(
            rows, cols, n, [&](std::size_t i, std::size_t j) { return a[i][j]; },
            y, v);
        bool ok_x = Indifference(
            cols, rows, m, [&](std::size_t j, std::size_t i) { return b[i][j]; },
            x, u);
        if (!ok_x || !ok_y) {
          ++result.degenerate_supports;
          continue;
        }
        if (!feasible(x) || !feasible(y)) continue;
        bool stable = true;
        for (std::size_t i = 0; i < m && stable; ++i) {
          double ay = 0.0;
          for (std::size_t j = 0; j < n; ++j) ay += a[i][j] * y[j];
          stable = ay <= v + tol;
        }
        for (std::size_t j = 0; j < n && stable; ++j) {
          double xb = 0.0;
          for (std::size_t i = 0; i < m; ++i) xb += x[i] * b[i][j];
          stable = xb <= u + tol;
        }
        if (stable && !duplicate(x, y)) result.equilibria.emplace_back(x, y);
      }
    }
  }
  return result;
}

Matrix ParseMatrixJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_array() || j.empty()) {
    throw ParseError("matrix must be a non-empty array of rows");
  }
  Matrix m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.empty()) {
      throw ParseError("$[" + std::to_string(i) +
                       "]: row must be a non-empty array");
    }
    std::vector<double> r;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row[k].is_number()) {
        throw ParseError("$[" + std::to_string(i) + "][" + std::to_string(k) +
                         "]: expected a number");
      }
      r.push_back(row[k].get<double>());
    }
    if (!m.empty() && r.size() != m[0].size()) {
      throw ParseError("$[" + std::to_string(i) + "]: ragged row");
    }
    m.push_back(std::move(r));
  }
  return m;
}

nlohmann::ordered_json MatrixToJson(const Matrix& m) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

nlohmann::ordered_json SolutionToJson(const ZeroSumSolution& solution) {
  // Adding +0.0 turns -0 into 0.
  auto clean = [](std::vector<double> v) {
    for (double& x : v) x += 0.0;
    return v;
  };
  nlohmann::ordered_json out;
  out["value"] = solution.value + 0.0;
  out["strategy"] = clean(solution.strategy);
  out["certificate"] = clean(solution.certificate);
  out["column_strategy"] = clean(solution.column_strategy);
  out["column_value"] = solution.column_value + 0.0;
  out["duality_gap"] = solution.duality_gap + 0.0;
  return out;
}

}  // namespace sbn
