// Copyright 2026 The Duel Authors.
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

#include "duel/batch.hpp"

#include <cmath>
#include <cstddef>

#include "duel/error.hpp"

namespace duel {

ExplorationLog explore_uniform(const ContextualEnvironment& env, int m,
                               Rng& rng) {
  if (m < 1) throw BadParams("exploration budget must be positive");
  const int k = env.k();
  ExplorationLog log;
  log.m = m;
  log.k = k;
  log.contexts = env.contexts();
  log.l_bound = static_cast<double>(k) * k;
  log.v_bound = log.l_bound;
  log.records.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const int s = sample_round(env, rng);
    const std::uint64_t pair = rng.next_below(static_cast<std::uint64_t>(k) * k);
    const int a = static_cast<int>(pair / k);
    const int b = static_cast<int>(pair % k);
    const int r = duel(env, s, a, b, rng);
    log.records.push_back(DuelRecord{i, s, a, b, r});
  }
  return log;
}

ExplorationLog explore_uniform(const ContextualEnvironment& env, int m,
                               std::uint64_t seed) {
  Rng rng = Rng::stream(seed, streams::kExplore);
  return explore_uniform(env, m, rng);
}

BlockGame estimator_blocks(const ExplorationLog& log) {
  if (log.m < 1 || static_cast<int>(log.records.size()) != log.m) {
    throw DimensionMismatch("log record count and m differ");
  }
  if (log.k < 1) throw BadParams("log arm count must be positive");
  BlockGame game;
  game.m = log.m;
  game.k = log.k;
  game.contexts = log.contexts;
  game.record_context.reserve(static_cast<std::size_t>(log.m));
  game.blocks.reserve(static_cast<std::size_t>(log.m));
  const double scale = static_cast<double>(log.k) * log.k;
  for (const DuelRecord& rec : log.records) {
    if (rec.context < 0 || rec.context >= log.contexts) {
      throw DimensionMismatch("log context index out of range");
    }
    if (rec.a < 0 || rec.a >= log.k || rec.b < 0 || rec.b >= log.k) {
      throw DimensionMismatch("log arm index out of range");
    }
    if (rec.r != 1 && rec.r != -1) {
      throw RangeViolation(rec.a, rec.b, rec.r);
    }
    game.record_context.push_back(rec.context);
    game.blocks.push_back(EstimatorBlock{rec.a, rec.b, scale * rec.r});
  }
  return game;
}

std::vector<double> policy_vector(const BlockGame& game, const Policy& policy) {
  if (policy.k() != game.k) {
    throw DimensionMismatch("policy and game arm counts differ");
  }
  const double unit = 1.0 / std::sqrt(static_cast<double>(game.m));
  std::vector<double> v(static_cast<std::size_t>(game.m) * game.k, 0.0);
  for (int i = 0; i < game.m; ++i) {
    v[static_cast<std::size_t>(i) * game.k +
      policy.action(game.record_context[i])] = unit;
  }
  return v;
}

std::vector<double> apply_B(const BlockGame& game, const std::vector<double>& u) {
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  if (u.size() != dim) throw DimensionMismatch("vector length and mK differ");
  std::vector<double> y(dim, 0.0);
  for (int i = 0; i < game.m; ++i) {
    const EstimatorBlock& blk = game.blocks[i];
    const std::size_t base = static_cast<std::size_t>(i) * game.k;
    y[base + blk.a] = blk.value * u[base + blk.b];
  }
  return y;
}

std::vector<double> apply_Bt(const BlockGame& game, const std::vector<double>& w) {
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  if (w.size() != dim) throw DimensionMismatch("vector length and mK differ");
  std::vector<double> y(dim, 0.0);
  for (int i = 0; i < game.m; ++i) {
    const EstimatorBlock& blk = game.blocks[i];
    const std::size_t base = static_cast<std::size_t>(i) * game.k;
    y[base + blk.b] = blk.value * w[base + blk.a];
  }
  return y;
}

double mhat_entry(const BlockGame& game, const Policy& row, const Policy& col) {
  if (row.k() != game.k || col.k() != game.k) {
    throw DimensionMismatch("policy and game arm counts differ");
  }
  double total = 0.0;
  for (int i = 0; i < game.m; ++i) {
    const int s = game.record_context[i];
    const EstimatorBlock& blk = game.blocks[i];
    if (row.action(s) == blk.a && col.action(s) == blk.b) total += blk.value;
  }
  return total / game.m;
}

double mhat_entry(const ExplorationLog& log, const Policy& row,
                  const Policy& col) {
  if (row.k() != log.k || col.k() != log.k) {
    throw DimensionMismatch("policy and log arm counts differ");
  }
  const double scale = static_cast<double>(log.k) * log.k;
  double total = 0.0;
  for (const DuelRecord& rec : log.records) {
    if (row.action(rec.context) == rec.a && col.action(rec.context) == rec.b) {
      total += scale * rec.r;
    }
  }
  return total / log.m;
}

std::vector<std::vector<double>> mhat_matrix(const BlockGame& game,
                                             const PolicyClass& policy_class,
                                             std::int64_t cap) {
  const std::int64_t count = policy_class.enumeration_count(cap);
  std::vector<Policy> policies;
  policies.reserve(static_cast<std::size_t>(count));
  for (std::int64_t j = 0; j < count; ++j) {
    policies.push_back(policy_class.policy_at(j));
  }
  std::vector<std::vector<double>> out(
      static_cast<std::size_t>(count),
      std::vector<double>(static_cast<std::size_t>(count), 0.0));
  // One pass over the log: round i contributes value_i / m to every pair
  // whose row policy picks a_i and column policy picks b_i at context x_i.
  for (int i = 0; i < game.m; ++i) {
    const int s = game.record_context[i];
    const EstimatorBlock& blk = game.blocks[i];
    const double v = blk.value / game.m;
    for (std::int64_t rj = 0; rj < count; ++rj) {
      if (policies[static_cast<std::size_t>(rj)].action(s) != blk.a) continue;
      for (std::int64_t cj = 0; cj < count; ++cj) {
        if (policies[static_cast<std::size_t>(cj)].action(s) != blk.b) continue;
        out[static_cast<std::size_t>(rj)][static_cast<std::size_t>(cj)] += v;
      }
    }
  }
  return out;
}

double bernstein_epsilon(int m, int k, double log_class_size, double delta) {
  if (m < 1) throw BadParams("sample count must be positive");
  if (k < 1) throw BadParams("arm count must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw BadParams("delta must lie in (0, 1)");
  const double range = static_cast<double>(k) * k;
  const double variance = range;
  const double log_term = 2.0 * log_class_size - std::log(delta);
  return 2.0 * (1.0 + range) * log_term / (3.0 * m) +
         std::sqrt(2.0 * variance * log_term / m);
}

ClassificationOracle::ClassificationOracle(const BlockGame& game)
    : m_(game.m),
      k_(game.k),
      contexts_(game.contexts),
      record_context_(game.record_context) {
  if (m_ < 1 || static_cast<int>(record_context_.size()) != m_) {
    throw DimensionMismatch("game record count and m differ");
  }
}

Policy ClassificationOracle::argmin(const std::vector<double>& cost) {
  const std::size_t dim = static_cast<std::size_t>(m_) * k_;
  if (cost.size() != dim) throw DimensionMismatch("cost length and mK differ");
  const double unit = 1.0 / std::sqrt(static_cast<double>(m_));
  std::vector<std::vector<double>> agg(contexts_, std::vector<double>(k_, 0.0));
  for (int i = 0; i < m_; ++i) {
    auto& row = agg[record_context_[i]];
    const std::size_t base = static_cast<std::size_t>(i) * k_;
    for (int a = 0; a < k_; ++a) row[a] += unit * cost[base + a];
  }
  ++calls_;
  return solve(agg);
}

Policy ClassificationOracle::argmin_aggregated(
    const std::vector<std::vector<double>>& agg) {
  if (static_cast<int>(agg.size()) != contexts_) {
    throw DimensionMismatch("aggregated cost context count differs");
  }
  for (const auto& row : agg) {
    if (static_cast<int>(row.size()) != k_) {
      throw DimensionMismatch("aggregated cost arm count differs");
    }
  }
  ++calls_;
  return solve(agg);
}

EnumerationOracle::EnumerationOracle(const BlockGame& game,
                                     const PolicyClass& policy_class,
                                     std::int64_t cap)
    : ClassificationOracle(game) {
  if (policy_class.k() != game.k) {
    throw DimensionMismatch("policy class and game arm counts differ");
  }
  const std::int64_t count = policy_class.enumeration_count(cap);
  policies_.reserve(static_cast<std::size_t>(count));
  for (std::int64_t j = 0; j < count; ++j) {
    policies_.push_back(policy_class.policy_at(j));
  }
}

Policy EnumerationOracle::solve(const std::vector<std::vector<double>>& agg) {
  std::size_t best = 0;
  double best_cost = 0.0;
  for (std::size_t j = 0; j < policies_.size(); ++j) {
    double c = 0.0;
    for (std::size_t s = 0; s < agg.size(); ++s) {
      c += agg[s][policies_[j].action(static_cast<int>(s))];
    }
    if (j == 0 || c < best_cost) {
      best = j;
      best_cost = c;
    }
  }
  return policies_[best];
}

FactoredOracle::FactoredOracle(const BlockGame& game,
                               const PolicyClass& policy_class)
    : ClassificationOracle(game) {
  if (policy_class.kind() != PolicyClass::Kind::kFullMapping) {
    throw BadParams("factored oracle needs a full-mapping class");
  }
  if (policy_class.k() != game.k || policy_class.contexts() != game.contexts) {
    throw DimensionMismatch("policy class and game shapes differ");
  }
}

Policy FactoredOracle::solve(const std::vector<std::vector<double>>& agg) {
  std::vector<int> actions(agg.size(), 0);
  for (std::size_t s = 0; s < agg.size(); ++s) {
    int best = 0;
    for (int a = 1; a < k(); ++a) {
      if (agg[s][a] < agg[s][best]) best = a;
    }
    actions[s] = best;
  }
  return Policy(actions, k());
}

std::unique_ptr<ClassificationOracle> make_oracle(const BlockGame& game,
                                                  const PolicyClass& policy_class,
                                                  std::int64_t cap) {
  if (policy_class.kind() == PolicyClass::Kind::kFullMapping) {
    return std::make_unique<FactoredOracle>(game, policy_class);
  }
  return std::make_unique<EnumerationOracle>(game, policy_class, cap);
}

std::pair<Policy, std::vector<double>> oracle_enumerate(
    const BlockGame& game, const PolicyClass& policy_class,
    const std::vector<double>& cost, std::int64_t cap) {
  EnumerationOracle oracle(game, policy_class, cap);
  Policy policy = oracle.argmin(cost);
  std::vector<double> v = policy_vector(game, policy);
  return {std::move(policy), std::move(v)};
}

std::pair<Policy, std::vector<double>> oracle_factored(
    const BlockGame& game, const PolicyClass& policy_class,
    const std::vector<double>& cost) {
  FactoredOracle oracle(game, policy_class);
  Policy policy = oracle.argmin(cost);
  std::vector<double> v = policy_vector(game, policy);
  return {std::move(policy), std::move(v)};
}

}  // namespace duel
