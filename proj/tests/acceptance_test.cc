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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sbn/bound_network.h"
#include "sbn/games.h"
#include "sbn/inference.h"
#include "sbn/reduction.h"
#include "sbn/rng.h"
#include "sbn/solver.h"
#include "test_util.h"

namespace sbn {
namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Seeded skew-symmetric suite shared by criteria 2 and 3.
std::vector<Matrix> SkewSuite() {
  std::vector<Matrix> suite;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const int n = 1 + static_cast<int>(k % 10);
    suite.push_back(
        GenSkewSymmetric(n, 2, SplitMix64::StreamSeed(2026, k)).ToMatrix());
  }
  return suite;
}

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

Verdict ReductionFidelity() {
  int graphs = 0;
  std::size_t profiles = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto g = testing::RandomSbn(seed);
    ExtensiveTree tree = ToExtensiveForm(g);
    ++graphs;
    for (const StrategyProfile& p : EnumerateProfiles(*g)) {
      ++profiles;
      auto direct = ExactExpectedPayoffs(Bind(g, p), kDefaultMaxSupport);
      auto walked = TreeExpectedPayoffs(tree, p);
      for (std::size_t k = 0; k < direct.size(); ++k) {
        worst = std::max(worst, std::abs(direct[k] - walked[k]));
      }
    }
  }
  return {worst <= 1e-9, std::to_string(graphs) + " graphs, " +
                             std::to_string(profiles) +
                             " profiles, max |tree - inference| " + Fmt(worst)};
}

Verdict SkewValueZero() {
  double worst_value = 0.0, worst_gap = 0.0;
  for (const Matrix& a : SkewSuite()) {
    ZeroSumSolution s = ZeroSumSolve(a);
    worst_value = std::max(worst_value, std::abs(s.value));
    worst_gap = std::max(worst_gap, s.duality_gap);
  }
  return {worst_value <= 1e-7 && worst_gap <= 1e-7,
          "200 games, max |value| " + Fmt(worst_value) + ", max gap " +
              Fmt(worst_gap)};
}

Verdict SelfBestResponse() {
  double worst_pure = -1e300, worst_mam = -1e300;
  for (const Matrix& a : SkewSuite()) {
    MixedStrategy m = SymmetricNashSkew(a);
    double mam = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double am = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) am += a[i][j] * m[j];
      worst_pure = std::max(worst_pure, am);
      mam += m[i] * am;
    }
    worst_mam = std::max(worst_mam, mam);
  }
  return {worst_pure <= 1e-7 && worst_mam <= 1e-9,
          "max_i (Am)_i " + Fmt(worst_pure) + ", max m^T A m " +
              Fmt(worst_mam)};
}

Verdict LetsPlayGuarantee() {
  constexpr int kDecimals = 2;
  const double margin = std::pow(10.0, -kDecimals) / 2;
  std::vector<std::string> b_members = {"uniform", "br-to-uniform"};
  for (int k = 0; k < 6; ++k) b_members.push_back("pure-" + std::to_string(k));

  double min_all = 1e300, min_flagged = 1e300;
  int flagged_cases = 0, failures = 0;
  std::ostringstream misses;
  for (std::uint64_t pool = 1; pool <= 20; ++pool) {
    std::vector<SkewSymmetricGame> subgames;
    for (std::uint64_t k = 0; k < 5; ++k) {
      SplitMix64 rng(SplitMix64::StreamSeed(pool, k));
      const int n = static_cast<int>(rng.UniformInt(2, 6));
      subgames.push_back(GenSkewSymmetric(n, kDecimals, rng.Next()));
    }
    const std::vector<double> weights(5, 0.2);
    GameBundle lp = MakeLetsPlay(subgames, weights, {kLpNash}, b_members);
    const SbnGraph& g = *lp.graph;
    for (const std::string& b : b_members) {
      StrategyProfile p;
      p.choices["S_a"] = *g.node("S_a").family.IndexOf(kLpNash);
      p.choices["S_b"] = *g.node("S_b").family.IndexOf(b);
      const double ea =
          ExactExpectedPayoffs(Bind(lp.graph, p), kDefaultMaxSupport)[0];
      bool flagged = false;
      for (std::size_t k = 0; k < subgames.size(); ++k) {
        flagged |= weights[k] > 0 &&
                   ResponseGap(subgames[k], MemberStrategy(b, subgames[k])) >
                       kResponseGapTolerance;
      }
      min_all = std::min(min_all, ea);
      bool ok = ea >= -1e-7;
      if (flagged) {
        ++flagged_cases;
        min_flagged = std::min(min_flagged, ea);
        ok = ok && ea >= margin;
      }
      if (!ok) {
        if (failures < 3) misses << " [pool " << pool << " " << b << " E[A] "
                                 << Fmt(ea) << "]";
        ++failures;
      }
    }
  }
  return {failures == 0,
          "160 cases, min E[A] " + Fmt(min_all) + ", " +
              std::to_string(flagged_cases) + " flagged with min E[A] " +
              Fmt(min_flagged) + " vs margin " + Fmt(margin) + ", " +
              std::to_string(failures) + " violations" + misses.str()};
}

Verdict NoCountAsymmetry() {
  TruncationOptions options;
  options.tail_tol = 1e-6;
  options.n_max_cap = 16;
  options.clamp = true;
  std::ostringstream detail;
  bool ok = true;
  for (double lambda : {0.5, 1.0, 2.0}) {
    TruncatedExponential len = TruncatedExponential::Make(lambda, options);
    GameBundle tp = MakeTwoPlayerNoCount(len);
    const int g_star = BestConstantGuess(len).g_star;
    StrategyProfile p;
    p.choices["x"] = *tp.graph->node("x").family.IndexOf(ConstantLabel(g_star));
    p.choices["y"] = *tp.graph->node("y").family.IndexOf(kCounter);
    auto v = ExactExpectedPayoffs(Bind(tp.graph, p), kDefaultMaxSupport);
    const double gap = v[1] - v[0];
    ok = ok && gap > 0;
    detail << "lambda " << lambda << " (n_max " << len.n_max << "): gap "
           << Fmt(gap) << "; ";
  }
  GameBundle fixture = MakeTwoPlayerNoCount(TruncatedExponential::PointMass(2));
  StrategyProfile p;
  p.choices["x"] = *fixture.graph->node("x").family.IndexOf(ConstantLabel(1));
  p.choices["y"] = *fixture.graph->node("y").family.IndexOf(kCounter);
  auto v = ExactExpectedPayoffs(Bind(fixture.graph, p), kDefaultMaxSupport);
  const bool fixture_ok =
      std::abs(v[0] - 0.25) <= 1e-12 && std::abs(v[1] - 0.75) <= 1e-12;
  detail << "n=2 fixture (" << v[0] << ", " << v[1] << ")";
  return {ok && fixture_ok, detail.str()};
}

Verdict NoCountConjecture() {
  // Wide cap so lambda = 0.5 meets the tail tolerance.
  TruncationOptions options;
  options.n_max_cap = 60;
  std::ostringstream detail;
  bool ok = true;
  for (double lambda : {0.5, 1.0, 2.0}) {
    TruncatedExponential len = TruncatedExponential::Make(lambda, options);
    ConstantGuessTable t = BestConstantGuess(len);
    // Independent oracle: Pascal's triangle counts the strings of length n
    // with k ones; sum pmf(n) * count / 2^n over every (n, k).
    std::vector<std::uint64_t> row{1};
    std::vector<double> win(len.n_max + 1, 0.0);
    for (int n = 1; n <= len.n_max; ++n) {
      std::vector<std::uint64_t> next(n + 1, 1);
      for (int k = 1; k < n; ++k) next[k] = row[k - 1] + row[k];
      row = std::move(next);
      for (int k = 0; k <= n; ++k) {
        win[k] += len.pmf[n - 1] *
                  std::ldexp(static_cast<double>(row[k]), -n);
      }
    }
    int oracle_star = 0;
    for (int k = 1; k <= len.n_max; ++k) {
      if (win[k] > win[oracle_star]) oracle_star = k;
    }
    const bool same = t.table == win && t.g_star == oracle_star &&
                      t.win_prob == win[oracle_star];
    ok = ok && same;
    const long conjecture = std::lround(1.0 / (2 * lambda));
    detail << "lambda " << lambda << ": g* " << t.g_star << " (oracle "
           << oracle_star << ", " << (same ? "exact match" : "MISMATCH")
           << "), round(1/(2 lambda)) " << conjecture
           << (conjecture == t.g_star ? " agrees" : " differs") << "; ";
  }
  return {ok, detail.str() + "conjecture reported only"};
}

Verdict MonteCarloSoundness() {
  int networks = 0;
  double worst_z = 0.0;
  bool deterministic = true;
  for (std::uint64_t seed = 101; networks < 20; ++seed) {
    auto g = testing::RandomSbn(seed);
    std::vector<StrategyProfile> profiles;
    for (const StrategyProfile& p : EnumerateProfiles(*g)) profiles.push_back(p);
    BoundNetwork bound = Bind(g, profiles[seed % profiles.size()]);
    ++networks;
    auto exact = ExactExpectedPayoffs(bound, kDefaultMaxSupport);
    const std::uint64_t mc_seed = SplitMix64::StreamSeed(7, seed);
    PayoffEstimate e = MonteCarloExpectedPayoffs(bound, 100000, mc_seed, 1);
    PayoffEstimate again = MonteCarloExpectedPayoffs(bound, 100000, mc_seed, 1);
    PayoffEstimate wide = MonteCarloExpectedPayoffs(bound, 100000, mc_seed, 4);
    deterministic = deterministic && e.mean == again.mean &&
                    e.std_error == again.std_error && e.mean == wide.mean &&
                    e.std_error == wide.std_error;
    for (std::size_t k = 0; k < exact.size(); ++k) {
      const double diff = std::abs(e.mean[k] - exact[k]);
      // Zero-variance coordinates can only differ by rounding.
      const double z = e.std_error[k] > 0 ? diff / e.std_error[k]
                                          : (diff <= 1e-12 ? 0.0 : 1e300);
      worst_z = std::max(worst_z, z);
    }
  }
  return {worst_z <= 5.0 && deterministic,
          std::to_string(networks) + " networks, n = 1e5, max |z| " +
              Fmt(worst_z) + ", repeat and worker runs " +
              (deterministic ? "bit-identical" : "DIFFER")};
}

Verdict EquilibriumAudit() {
  const Matrix rps = {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}};
  SupportEnumerationResult r =
      SupportEnumeration2p(NormalFormGame::ZeroSum(rps));
  bool rps_ok = r.equilibria.size() == 1;
  if (rps_ok) {
    for (double p : r.equilibria[0].first) rps_ok &= std::abs(p - 1.0 / 3) <= 1e-6;
    for (double p : r.equilibria[0].second) rps_ok &= std::abs(p - 1.0 / 3) <= 1e-6;
  }
  SplitMix64 rng(8);
  std::size_t found = 0, failed = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = rng.UniformInt(1, 4), cols = rng.UniformInt(1, 4);
    Matrix a(rows, std::vector<double>(cols)), b = a;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        a[i][j] = std::round(rng.Normal() * 100) / 100;
        b[i][j] = std::round(rng.Normal() * 100) / 100;
      }
    }
    NormalFormGame game = NormalFormGame::Bimatrix(a, b);
    for (const auto& [x, y] : SupportEnumeration2p(game).equilibria) {
      ++found;
      NashCheck c = EpsilonNashCheck(game, {x, y}, 1e-6);
      worst = std::max(worst, c.max_regret);
      failed += !c.is_nash;
    }
  }
  return {rps_ok && failed == 0 && found > 0,
          std::string("RPS ") + (rps_ok ? "unique uniform" : "WRONG") +
              ", 50 bimatrices, " + std::to_string(found) +
              " equilibria, max regret " + Fmt(worst)};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; 0 = none
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace sbn

int main() {
  using namespace sbn;
  const std::vector<Criterion> criteria = {
      {1, "reduction fidelity", 10, ReductionFidelity},
      {2, "skew-symmetric value zero", 5, SkewValueZero},
      {3, "N is a best response to itself", 0, SelfBestResponse},
      {4, "LetsPlay guarantee", 10, LetsPlayGuarantee},
      {5, "TwoPlayerNoCount asymmetry", 60, NoCountAsymmetry},
      {6, "NoCount conjecture report", 0, NoCountConjecture},
      {7, "Monte Carlo soundness", 0, MonteCarloSoundness},
      {8, "equilibrium audit", 0, EquilibriumAudit},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (c.time_limit > 0 && secs >= c.time_limit) {
      out.pass = false;
      out.detail += " [over the " + Fmt(c.time_limit) + " s limit]";
    }
    failures += !out.pass;
    std::printf("%s criterion %d (%s): %s; %.2f s\n",
                out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                secs);
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
