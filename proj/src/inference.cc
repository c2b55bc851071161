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

#include "sbn/inference.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "sbn/error.h"
#include "sbn/rng.h"

namespace sbn {

std::size_t MaxSupportFromEnv() {
  const char* env = std::getenv("SBN_MAX_SUPPORT");
  if (env == nullptr || *env == '\0') return kDefaultMaxSupport;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) return kDefaultMaxSupport;
  return static_cast<std::size_t>(v);
}

std::map<NodeId, Value> WorldOutcome::Values(const SbnGraph& graph) const {
  std::map<NodeId, Value> out;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const Node& node = graph.nodes()[i];
    out.emplace(node.id, node.domain[assignment[i]]);
  }
  return out;
}

WorldOutcome Sample(const BoundNetwork& bound, std::uint64_t seed) {
  const SbnGraph& graph = bound.graph();
  SplitMix64 rng(seed);
  WorldOutcome world;
  world.assignment.assign(graph.size(), 0);
  world.payoffs.assign(graph.n_players(), 0.0);
  std::vector<Outcome> scratch;
  for (std::size_t node : bound.order()) {
    auto row = bound.Row(node, world.assignment, scratch);
    double u = rng.Uniform();
    double cumulative = 0.0;
    const Outcome* chosen = nullptr;
    for (const Outcome& o : row) {
      if (o.prob <= 0.0) continue;
      chosen = &o;
      cumulative += o.prob;
      if (u < cumulative) break;
    }
    if (chosen == nullptr) {
      throw InternalError("empty CPD row at node '" + graph.nodes()[node].id +
                          "'");
    }
    world.assignment[node] = chosen->index;
    if (bound.is_payoff(node)) {
      auto pay = bound.Payoff(node, chosen->index);
      for (std::size_t p = 0; p < pay.size(); ++p) world.payoffs[p] += pay[p];
    }
  }
  return world;
}

namespace {

class Enumerator {
 public:
  Enumerator(const BoundNetwork& bound, std::size_t max_support,
             const JointVisitor& visitor)
      : bound_(bound),
        order_(bound.order()),
        visitor_(visitor),
        assignment_(bound.graph().size(), 0),
        scratch_(order_.size()),
        payoff_(bound.graph().n_players(), 0.0) {
    double support_bound = bound.SupportBound();
    if (support_bound > static_cast<double>(max_support)) {
      limit_ = max_support;
      bound_estimate_ = support_bound;
    }
    stats_.payoffs.assign(bound.graph().n_players(), 0.0);
  }

  EnumerationStats Run() {
    Visit(0, 1.0);
    return stats_;
  }

 private:
  void Visit(std::size_t depth, double p) {
    if (depth == order_.size()) {
      ++stats_.leaves;
      if (limit_ != 0 && stats_.leaves > limit_) {
        throw CapacityError(
            "joint support exceeds max_support=" + std::to_string(limit_) +
            " (upper bound " + std::to_string(bound_estimate_) +
            " joint outcomes); raise SBN_MAX_SUPPORT or shrink the game");
      }
      stats_.total_probability += p;
      for (std::size_t k = 0; k < payoff_.size(); ++k) {
        stats_.payoffs[k] += p * payoff_[k];
      }
      if (visitor_) visitor_(assignment_, p);
      return;
    }
    std::size_t node = order_[depth];
    auto row = bound_.Row(node, assignment_, scratch_[depth]);
    const bool payoff = bound_.is_payoff(node);
    for (const Outcome& o : row) {
      if (o.prob == 0.0) continue;
      assignment_[node] = o.index;
      if (payoff) {
        auto pay = bound_.Payoff(node, o.index);
        for (std::size_t k = 0; k < pay.size(); ++k) payoff_[k] += pay[k];
        Visit(depth + 1, p * o.prob);
        for (std::size_t k = 0; k < pay.size(); ++k) payoff_[k] -= pay[k];
      } else {
        Visit(depth + 1, p * o.prob);
      }
    }
    assignment_[node] = 0;
  }

  const BoundNetwork& bound_;
  const std::vector<std::size_t>& order_;
  const JointVisitor& visitor_;
  std::vector<std::uint32_t> assignment_;
  std::vector<std::vector<Outcome>> scratch_;
  std::vector<double> payoff_;
  std::size_t limit_ = 0;
  double bound_estimate_ = 0.0;
  EnumerationStats stats_;
};

}  // namespace

EnumerationStats EnumerateJoint(const BoundNetwork& bound,
                                std::size_t max_support,
                                const JointVisitor& visitor) {
  return Enumerator(bound, max_support, visitor).Run();
}

std::vector<double> ExactExpectedPayoffs(const BoundNetwork& bound,
                                         std::size_t max_support) {
  return EnumerateJoint(bound, max_support).payoffs;
}

ExactRationalResult ExactExpectedPayoffsRational(const BoundNetwork& bound,
                                                 std::size_t max_support) {
  if (bound.graph().mode() != ProbabilityMode::kRational) {
    throw ContractError("exact rational enumeration needs a rational graph");
  }
  const auto& order = bound.order();
  const int n = bound.graph().n_players();
  ExactRationalResult result;
  result.payoffs.assign(n, Rational());
  std::vector<std::uint32_t> assignment(bound.graph().size(), 0);
  std::vector<Rational> payoff(n);
  std::vector<Outcome> scratch;

  std::function<void(std::size_t, const Rational&)> visit =
      [&](std::size_t depth, const Rational& p) {
        if (depth == order.size()) {
          if (++result.leaves > max_support) {
            throw CapacityError("joint support exceeds max_support=" +
                                std::to_string(max_support));
          }
          result.total_probability += p;
          for (int k = 0; k < n; ++k) result.payoffs[k] += p * payoff[k];
          return;
        }
        std::size_t node = order[depth];
        auto row = bound.Row(node, assignment, scratch);
        auto exact = bound.ExactRow(node, assignment);
        std::vector<Outcome> entries(row.begin(), row.end());
        std::vector<Rational> probs(exact.begin(), exact.end());
        for (std::size_t e = 0; e < entries.size(); ++e) {
          if (probs[e] == Rational(0)) continue;
          assignment[node] = entries[e].index;
          if (bound.is_payoff(node)) {
            auto pay = bound.ExactPayoff(node, entries[e].index);
            for (int k = 0; k < n; ++k) payoff[k] += pay[k];
            visit(depth + 1, p * probs[e]);
            for (int k = 0; k < n; ++k) payoff[k] = payoff[k] - pay[k];
          } else {
            visit(depth + 1, p * probs[e]);
          }
        }
        assignment[node] = 0;
      };
  visit(0, Rational(1));
  return result;
}

namespace {

constexpr std::size_t kBlockSize = 1024;

struct Moments {
  double count = 0.0;
  std::vector<double> mean;
  std::vector<double> m2;
};

// Chan et al. pairwise update.
Moments Combine(const Moments& a, const Moments& b) {
  if (a.count == 0.0) return b;
  if (b.count == 0.0) return a;
  Moments out;
  out.count = a.count + b.count;
  out.mean.resize(a.mean.size());
  out.m2.resize(a.mean.size());
  for (std::size_t k = 0; k < a.mean.size(); ++k) {
    double delta = b.mean[k] - a.mean[k];
    out.mean[k] = a.mean[k] + delta * (b.count / out.count);
    out.m2[k] =
        a.m2[k] + b.m2[k] + delta * delta * (a.count * b.count / out.count);
  }
  return out;
}

Moments Reduce(const std::vector<Moments>& blocks, std::size_t lo,
               std::size_t hi) {
  if (hi - lo == 1) return blocks[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return Combine(Reduce(blocks, lo, mid), Reduce(blocks, mid, hi));
}

Moments RunBlock(const BoundNetwork& bound, std::size_t first,
                 std::size_t last, std::uint64_t seed) {
  const int n = bound.graph().n_players();
  Moments m;
  m.mean.assign(n, 0.0);
  m.m2.assign(n, 0.0);
  for (std::size_t i = first; i < last; ++i) {
    WorldOutcome world = Sample(bound, SplitMix64::StreamSeed(seed, i));
    m.count += 1.0;
    for (int k = 0; k < n; ++k) {
      double delta = world.payoffs[k] - m.mean[k];
      m.mean[k] += delta / m.count;
      m.m2[k] += delta * (world.payoffs[k] - m.mean[k]);
    }
  }
  return m;
}

}  // namespace

PayoffEstimate MonteCarloExpectedPayoffs(const BoundNetwork& bound,
                                         std::size_t n_samples,
                                         std::uint64_t seed, int workers) {
  if (n_samples < 2) throw ContractError("Monte Carlo needs n_samples >= 2");
  std::size_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;
  std::vector<Moments> blocks(n_blocks);
  auto run = [&](std::size_t b) {
    std::size_t first = b * kBlockSize;
    std::size_t last = std::min(n_samples, first + kBlockSize);
    blocks[b] = RunBlock(bound, first, last, seed);
  };
  if (workers <= 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  std::size_t n_workers = std::min<std::size_t>(workers, n_blocks);
  if (n_workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run(b);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < n_blocks; b += n_workers) run(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  Moments total = Reduce(blocks, 0, n_blocks);
  PayoffEstimate est;
  est.n_samples = n_samples;
  est.seed = seed;
  est.mean = total.mean;
  est.std_error.resize(total.mean.size());
  for (std::size_t k = 0; k < total.mean.size(); ++k) {
    double var = std::max(0.0, total.m2[k] / (total.count - 1.0));
    est.std_error[k] = std::sqrt(var / total.count);
  }
  return est;
}

}  // namespace sbn
