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

#include "sbn/bound_network.h"

#include <algorithm>
#include <utility>

#include "sbn/error.h"

namespace sbn {

const Cpd& BoundNetwork::resolved(const NodeId& id) const {
  auto idx = graph_->IndexOf(id);
  if (!idx) throw StructuralError("unknown node '" + id + "'");
  return *compiled_[*idx].cpd;
}

std::map<NodeId, const Cpd*> BoundNetwork::ResolvedMap() const {
  std::map<NodeId, const Cpd*> out;
  for (const Compiled& c : compiled_) {
    out.emplace(graph_->nodes()[c.node].id, c.cpd);
  }
  return out;
}

std::size_t BoundNetwork::RowIndex(
    const Compiled& c, std::span<const std::uint32_t> assignment) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < c.parents.size(); ++k) {
    idx = idx * c.radix[k] + assignment[c.parents[k]];
  }
  return idx;
}

std::span<const Outcome> BoundNetwork::Row(
    std::size_t node, std::span<const std::uint32_t> assignment,
    std::vector<Outcome>& scratch) const {
  const Compiled& c = compiled_[node];
  if (!c.cpd->is_rule()) return c.rows[RowIndex(c, assignment)];
  std::uint32_t parent_values[16];
  std::vector<std::uint32_t> many;
  std::span<const std::uint32_t> values;
  if (c.parents.size() <= 16) {
    for (std::size_t k = 0; k < c.parents.size(); ++k) {
      parent_values[k] = assignment[c.parents[k]];
    }
    values = std::span<const std::uint32_t>(parent_values, c.parents.size());
  } else {
    for (std::size_t p : c.parents) many.push_back(assignment[p]);
    values = many;
  }
  scratch.clear();
  c.cpd->rule()(values, scratch);
  return scratch;
}

std::span<const Rational> BoundNetwork::ExactRow(
    std::size_t node, std::span<const std::uint32_t> assignment) const {
  const Compiled& c = compiled_[node];
  if (c.exact_rows.empty()) {
    throw InternalError("no exact probabilities for node '" +
                        graph_->nodes()[node].id + "'");
  }
  return c.exact_rows[RowIndex(c, assignment)];
}

double BoundNetwork::SupportBound() const {
  double bound = 1.0;
  for (const Compiled& c : compiled_) {
    bound *= static_cast<double>(std::max<std::size_t>(c.max_support, 1));
  }
  return bound;
}

BoundNetwork Bind(std::shared_ptr<const SbnGraph> graph,
                  const StrategyProfile& profile) {
  if (!graph) throw ContractError("Bind called without a graph");
  for (const auto& [id, choice] : profile.choices) {
    const Node* n = graph->Find(id);
    if (n == nullptr || n->kind != NodeKind::kStrategic) {
      throw BindingError("'" + id + "' is not a strategic node");
    }
  }
  BoundNetwork bound;
  bound.profile_ = profile;
  bound.order_ = TopologicalIndices(*graph);
  const auto& nodes = graph->nodes();
  const bool exact = graph->mode() == ProbabilityMode::kRational;
  bound.compiled_.resize(nodes.size());
  bound.payoff_.resize(nodes.size());
  bound.exact_payoff_.resize(nodes.size());

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& node = nodes[i];
    BoundNetwork::Compiled& c = bound.compiled_[i];
    c.node = i;
    if (node.kind == NodeKind::kStrategic) {
      auto it = profile.choices.find(node.id);
      if (it == profile.choices.end()) {
        throw BindingError(node.id + " unbound");
      }
      if (it->second >= node.family.strategies.size()) {
        throw BindingError("choice " + std::to_string(it->second) +
                           " for '" + node.id + "' is out of range (family '" +
                           node.family.name + "' has " +
                           std::to_string(node.family.strategies.size()) +
                           " strategies)");
      }
      c.cpd = &node.family.strategies[it->second].cpd;
    } else {
      c.cpd = &node.cpd;
    }
    for (const NodeId& p : c.cpd->parents()) {
      std::size_t pi = *graph->IndexOf(p);  // TopologicalIndices checked ids
      c.parents.push_back(pi);
      c.radix.push_back(nodes[pi].domain.size());
    }

    if (c.cpd->is_rule()) {
      c.max_support = c.cpd->rule_max_support();
    } else {
      std::size_t total = 1;
      for (std::size_t r : c.radix) total *= r;
      c.rows.assign(total, {});
      if (exact) c.exact_rows.assign(total, {});
      std::vector<char> seen(total, 0);
      for (const Cpd::Row& row : c.cpd->rows()) {
        if (row.given.size() != c.parents.size()) {
          throw StructuralError("malformed CPD row for '" + node.id + "'");
        }
        std::size_t idx = 0;
        for (std::size_t k = 0; k < c.parents.size(); ++k) {
          auto vi = nodes[c.parents[k]].domain.IndexOf(row.given[k]);
          if (!vi) {
            throw StructuralError("CPD of '" + node.id +
                                  "' references unknown value " +
                                  ToString(row.given[k]));
          }
          idx = idx * c.radix[k] + *vi;
        }
        seen[idx] = 1;
        auto& out = c.rows[idx];
        out.clear();
        for (std::size_t v = 0; v < row.probs.size(); ++v) {
          if (row.probs[v] != 0.0) {
            out.push_back({static_cast<std::uint32_t>(v), row.probs[v]});
            if (exact) {
              if (row.exact.size() != row.probs.size()) {
                throw StructuralError("CPD of '" + node.id +
                                      "' lacks exact probabilities");
              }
              c.exact_rows[idx].push_back(row.exact[v]);
            }
          }
        }
        c.max_support = std::max(c.max_support, out.size());
      }
      if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw StructuralError("incomplete CPD for '" + node.id + "'");
      }
    }

    if (node.kind == NodeKind::kPayoff) {
      const int n = graph->n_players();
      auto& table = bound.payoff_[i];
      auto& exact_table = bound.exact_payoff_[i];
      for (const Value& v : node.domain.values()) {
        const auto* tuple = std::get_if<PayoffVector>(&v);
        if (tuple == nullptr) {
          throw StructuralError("payoff node '" + node.id +
                                "' has a non-tuple value");
        }
        std::vector<double> pay(n, 0.0);
        std::vector<Rational> exact_pay(n);
        if (node.owner == kAllPlayers) {
          if (static_cast<int>(tuple->size()) != n) {
            throw StructuralError("payoff tuple length mismatch at '" +
                                  node.id + "'");
          }
          for (int p = 0; p < n; ++p) {
            pay[p] = (*tuple)[p].ToDouble();
            exact_pay[p] = FromFixed((*tuple)[p]);
          }
        } else {
          if (tuple->size() != 1 || node.owner < 0 || node.owner >= n) {
            throw StructuralError("malformed per-player payoff node '" +
                                  node.id + "'");
          }
          pay[node.owner] = tuple->front().ToDouble();
          exact_pay[node.owner] = FromFixed(tuple->front());
        }
        table.push_back(std::move(pay));
        exact_table.push_back(std::move(exact_pay));
      }
      if (table.empty()) {
        throw StructuralError("payoff node '" + node.id + "' has no values");
      }
    }
  }
  bound.graph_ = std::move(graph);
  return bound;
}

}  // namespace sbn
