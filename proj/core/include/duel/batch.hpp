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

#ifndef DUEL_BATCH_HPP_
#define DUEL_BATCH_HPP_

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "duel/env.hpp"
#include "duel/rng.hpp"
#include "duel/types.hpp"

namespace duel {

// Uniform exploration sets l_bound = v_bound = K^2: the range and variance
// proxies of the single-entry estimators. Other static strategies may carry
// their own bounds.
struct ExplorationLog {
  int m = 0;
  int k = 0;
  int contexts = 0;
  double l_bound = 0.0;
  double v_bound = 0.0;
  std::vector<DuelRecord> records;
};

// m rounds: context ~ q, ordered pair (a, b) uniform over all K^2 pairs
// (self-duels included), one duel per round.
ExplorationLog explore_uniform(const ContextualEnvironment& env, int m,
                               Rng& rng);
ExplorationLog explore_uniform(const ContextualEnvironment& env, int m,
                               std::uint64_t seed);

// Single-entry unbiased estimate of P_{x_i}: entry (a_i, b_i) = K^2 r_i,
// every other entry zero.
struct EstimatorBlock {
  int a = 0;
  int b = 0;
  double value = 0.0;
};

// Block-diagonal game matrix B over R^{mK}: block i is the estimate of round
// i. With v_pi(i, a) = 1{pi(x_i) = a} / sqrt(m), v_pi^T B v_rho equals the
// sample mean of the estimated preferences, an unbiased estimate of
// M(pi, rho).
struct BlockGame {
  int m = 0;
  int k = 0;
  int contexts = 0;
  std::vector<int> record_context;
  std::vector<EstimatorBlock> blocks;
};

BlockGame estimator_blocks(const ExplorationLog& log);

std::vector<double> policy_vector(const BlockGame& game, const Policy& policy);
std::vector<double> apply_B(const BlockGame& game, const std::vector<double>& u);
std::vector<double> apply_Bt(const BlockGame& game, const std::vector<double>& w);

double mhat_entry(const BlockGame& game, const Policy& row, const Policy& col);
// Direct reading of the log, bypassing the block matrix; agrees with the
// quadratic form exactly.
double mhat_entry(const ExplorationLog& log, const Policy& row,
                  const Policy& col);
std::vector<std::vector<double>> mhat_matrix(const BlockGame& game,
                                             const PolicyClass& policy_class,
                                             std::int64_t cap = 10'000);

// Bernstein deviation bound, uniform over policy pairs: with range and
// variance proxies L = V = K^2,
//   eps = 2 (1 + L) ln(|Pi|^2 / delta) / (3 m) + sqrt(2 V ln(|Pi|^2 / delta) / m).
double bernstein_epsilon(int m, int k, double log_class_size, double delta);

// argmin over the policy class of cost . v_pi. Dense costs are regrouped to
// per-(context, action) sums first: cost . v_pi = sum_s agg[s][pi(s)] with
// agg[s][a] = sum_{i: x_i = s} cost(i K + a) / sqrt(m). Solvers that already
// maintain aggregated costs call argmin_aggregated directly; both entry
// points count as one call.
class ClassificationOracle {
 public:
  virtual ~ClassificationOracle() = default;

  Policy argmin(const std::vector<double>& cost);
  Policy argmin_aggregated(const std::vector<std::vector<double>>& agg);

  std::int64_t calls() const { return calls_; }
  virtual double slack() const { return 0.0; }
  int k() const { return k_; }
  int contexts() const { return contexts_; }

 protected:
  explicit ClassificationOracle(const BlockGame& game);
  virtual Policy solve(const std::vector<std::vector<double>>& agg) = 0;

 private:
  int m_;
  int k_;
  int contexts_;
  std::vector<int> record_context_;
  std::int64_t calls_ = 0;
};

// Scans an enumerated class; ties resolve to the lowest policy index.
class EnumerationOracle : public ClassificationOracle {
 public:
  EnumerationOracle(const BlockGame& game, const PolicyClass& policy_class,
                    std::int64_t cap = 10'000);

 protected:
  Policy solve(const std::vector<std::vector<double>>& agg) override;

 private:
  std::vector<Policy> policies_;
};

// FullMapping classes decompose: each context picks its own best action,
// ties resolve to the lowest action index.
class FactoredOracle : public ClassificationOracle {
 public:
  FactoredOracle(const BlockGame& game, const PolicyClass& policy_class);

 protected:
  Policy solve(const std::vector<std::vector<double>>& agg) override;
};

std::unique_ptr<ClassificationOracle> make_oracle(const BlockGame& game,
                                                  const PolicyClass& policy_class,
                                                  std::int64_t cap = 10'000);

// One-shot conveniences returning the chosen policy and its embedding.
std::pair<Policy, std::vector<double>> oracle_enumerate(
    const BlockGame& game, const PolicyClass& policy_class,
    const std::vector<double>& cost, std::int64_t cap = 10'000);
std::pair<Policy, std::vector<double>> oracle_factored(
    const BlockGame& game, const PolicyClass& policy_class,
    const std::vector<double>& cost);

}  // namespace duel

#endif  // DUEL_BATCH_HPP_
