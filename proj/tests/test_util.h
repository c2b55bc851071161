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

// Graph builders shared by the unit and acceptance tests.

#ifndef SBN_TESTS_TEST_UTIL_H_
#define SBN_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sbn/graph.h"
#include "sbn/rng.h"
#include "sbn/value.h"

namespace sbn::testing {

using RowFn = std::function<std::vector<double>(
    const std::vector<std::uint32_t>& parent_indices)>;

// Dense table over every parent assignment, first parent slowest.
inline Cpd MakeTable(const SbnGraph& graph, const std::vector<NodeId>& parents,
                     const RowFn& fn) {
  std::vector<const Domain*> domains;
  std::size_t total = 1;
  for (const NodeId& p : parents) {
    domains.push_back(&graph.node(p).domain);
    total *= domains.back()->size();
  }
  std::vector<Cpd::Row> rows;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<std::uint32_t> assignment(parents.size());
    std::size_t rest = idx;
    for (std::size_t k = parents.size(); k-- > 0;) {
      assignment[k] = static_cast<std::uint32_t>(rest % domains[k]->size());
      rest /= domains[k]->size();
    }
    Cpd::Row row;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      row.given.push_back((*domains[k])[assignment[k]]);
    }
    row.probs = fn(assignment);
    rows.push_back(std::move(row));
  }
  return Cpd::Table(parents, std::move(rows));
}

inline Node ChanceNode(const NodeId& id, Domain domain,
                       std::vector<NodeId> parents, Cpd cpd) {
  Node n;
  n.id = id;
  n.kind = NodeKind::kChance;
  n.domain = std::move(domain);
  n.parents = std::move(parents);
  n.cpd = std::move(cpd);
  return n;
}

inline Node StrategicNode(const NodeId& id, PlayerId owner, Domain domain,
                          std::vector<NodeId> parents,
                          std::vector<Strategy> strategies,
                          bool deterministic = false) {
  Node n;
  n.id = id;
  n.kind = NodeKind::kStrategic;
  n.owner = owner;
  n.domain = std::move(domain);
  n.parents = std::move(parents);
  n.family.name = id + "-family";
  n.family.strategies = std::move(strategies);
  n.family.deterministic = deterministic;
  return n;
}

inline Node PayoffNode(const NodeId& id, Domain domain,
                       std::vector<NodeId> parents, Cpd cpd,
                       PlayerId owner = kAllPlayers) {
  Node n;
  n.id = id;
  n.kind = NodeKind::kPayoff;
  n.owner = owner;
  n.domain = std::move(domain);
  n.parents = std::move(parents);
  n.cpd = std::move(cpd);
  return n;
}

inline PayoffVector Pv(std::initializer_list<double> values) {
  PayoffVector v;
  for (double x : values) v.push_back(FixedPoint::FromDouble(x));
  return v;
}

// Payoff domain {(0), (1), ..., (k-1)} for one player.
inline Domain IntegerPayoffs(int k) {
  std::vector<Value> values;
  for (int i = 0; i < k; ++i) values.emplace_back(Pv({double(i)}));
  return Domain(std::move(values));
}

// Fair coin c in {0,1} and a one-player payoff node copying it.
inline std::shared_ptr<const SbnGraph> CoinCopyGraph() {
  auto g = std::make_shared<SbnGraph>(1);
  g->AddNode(ChanceNode("c", Domain::Integers(0, 1), {},
                        Cpd::Prior({0.5, 0.5})));
  g->AddNode(PayoffNode("pi", IntegerPayoffs(2), {"c"},
                        MakeTable(*g, {"c"}, [](const auto& v) {
                          return OneHot(2, v[0]);
                        })));
  return g;
}

// One strategic node x in {0,1} (actions "zero", "one"), a fair coin c, and
// payoff x XOR c.
inline std::shared_ptr<const SbnGraph> XorGraph() {
  auto g = std::make_shared<SbnGraph>(1);
  g->AddNode(ChanceNode("c", Domain::Integers(0, 1), {},
                        Cpd::Prior({0.5, 0.5})));
  g->AddNode(StrategicNode("x", 0, Domain::Integers(0, 1), {},
                           {{"zero", Cpd::PointMass(2, 0)},
                            {"one", Cpd::PointMass(2, 1)}},
                           true));
  g->AddNode(PayoffNode("pi", IntegerPayoffs(2), {"c", "x"},
                        MakeTable(*g, {"c", "x"}, [](const auto& v) {
                          return OneHot(2, v[0] ^ v[1]);
                        })));
  return g;
}

// Two strategic nodes r, s with 2 point-mass actions each, owned by
// players `owner_r` and `owner_s`; payoff pays player 0 the value r + s.
inline std::shared_ptr<const SbnGraph> TwoNodeGraph(PlayerId owner_r,
                                                    PlayerId owner_s) {
  int players = std::max(owner_r, owner_s) + 1;
  auto g = std::make_shared<SbnGraph>(players);
  for (const char* id : {"r", "s"}) {
    g->AddNode(StrategicNode(id, id[0] == 'r' ? owner_r : owner_s,
                             Domain::Integers(0, 1), {},
                             {{"a0", Cpd::PointMass(2, 0)},
                              {"a1", Cpd::PointMass(2, 1)}}));
  }
  std::vector<Value> pays;
  for (int k = 0; k < 3; ++k) {
    PayoffVector v(players, FixedPoint(0, 0));
    v[0] = FixedPoint(k, 0);
    pays.emplace_back(v);
  }
  g->AddNode(PayoffNode("pi", Domain(pays), {"r", "s"},
                        MakeTable(*g, {"r", "s"}, [](const auto& v) {
                          return OneHot(3, v[0] + v[1]);
                        })));
  return g;
}

struct RandomSbnOptions {
  int max_strategic = 3;
  int max_family = 3;
  int max_chance = 3;
  int max_domain = 3;
  int max_players = 2;
};

inline std::vector<double> RandomRow(SplitMix64& rng, std::size_t size) {
  std::vector<double> p(size, 0.0);
  double u = rng.Uniform();
  if (u < 0.3) {
    p[rng.UniformInt(0, static_cast<std::int64_t>(size) - 1)] = 1.0;
    return p;
  }
  double sum = 0.0;
  for (double& x : p) {
    x = rng.Uniform() < 0.2 ? 0.0 : 0.05 + rng.Uniform();
    sum += x;
  }
  if (sum == 0.0) {
    p[0] = 1.0;
    return p;
  }
  for (double& x : p) x /= sum;
  // Put the rounding residue on the largest entry.
  double total = 0.0;
  for (double x : p) total += x;
  *std::max_element(p.begin(), p.end()) += 1.0 - total;
  return p;
}

// Small random SBN: up to 3 chance and 3 strategic nodes in random order,
// each taking up to 2 earlier nodes as parents, and one elided payoff node.
inline std::shared_ptr<const SbnGraph> RandomSbn(
    std::uint64_t seed, const RandomSbnOptions& opt = {}) {
  SplitMix64 rng(seed);
  const int players = static_cast<int>(rng.UniformInt(1, opt.max_players));
  const int n_chance = static_cast<int>(rng.UniformInt(0, opt.max_chance));
  const int n_strat = static_cast<int>(rng.UniformInt(1, opt.max_strategic));
  std::vector<NodeId> ids;
  for (int i = 0; i < n_chance; ++i) ids.push_back("c" + std::to_string(i));
  for (int i = 0; i < n_strat; ++i) ids.push_back("s" + std::to_string(i));
  // Fisher-Yates with the test RNG.
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::swap(ids[i - 1],
              ids[rng.UniformInt(0, static_cast<std::int64_t>(i) - 1)]);
  }

  auto g = std::make_shared<SbnGraph>(players);
  std::vector<NodeId> placed;
  for (const NodeId& id : ids) {
    std::vector<NodeId> parents;
    for (const NodeId& p : placed) {
      if (parents.size() < 2 && rng.Uniform() < 0.4) parents.push_back(p);
    }
    Domain domain = Domain::Integers(0, rng.UniformInt(1, opt.max_domain) - 1);
    const std::size_t size = domain.size();
    auto table = [&] {
      return MakeTable(*g, parents,
                       [&](const auto&) { return RandomRow(rng, size); });
    };
    if (id[0] == 'c') {
      Cpd cpd = table();
      g->AddNode(ChanceNode(id, std::move(domain), parents, std::move(cpd)));
    } else {
      std::vector<Strategy> members;
      int m = static_cast<int>(rng.UniformInt(1, opt.max_family));
      for (int k = 0; k < m; ++k) {
        members.push_back({"m" + std::to_string(k), table()});
      }
      PlayerId owner = static_cast<PlayerId>(rng.UniformInt(0, players - 1));
      g->AddNode(StrategicNode(id, owner, std::move(domain), parents,
                               std::move(members)));
    }
    placed.push_back(id);
  }

  std::vector<NodeId> parents;
  for (const NodeId& p : placed) {
    if (parents.size() < 3 && rng.Uniform() < 0.6) parents.push_back(p);
  }
  if (parents.empty()) parents.push_back(placed.back());
  std::set<PayoffVector> seen;
  std::vector<Value> pays;
  const int d = static_cast<int>(rng.UniformInt(1, 3));
  while (static_cast<int>(pays.size()) < d) {
    PayoffVector v;
    for (int p = 0; p < players; ++p) {
      v.push_back(FixedPoint(rng.UniformInt(-20, 20), 1));
    }
    if (seen.insert(v).second) pays.emplace_back(v);
  }
  const std::size_t size = pays.size();
  Cpd cpd = MakeTable(*g, parents,
                      [&](const auto&) { return RandomRow(rng, size); });
  g->AddNode(PayoffNode("pi", Domain(std::move(pays)), parents, std::move(cpd)));
  return g;
}

}  // namespace sbn::testing

#endif  // SBN_TESTS_TEST_UTIL_H_
