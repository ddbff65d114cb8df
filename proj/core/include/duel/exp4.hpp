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

#ifndef DUEL_EXP4_HPP_
#define DUEL_EXP4_HPP_

#include <cstdint>
#include <vector>

#include "duel/env.hpp"
#include "duel/rng.hpp"
#include "duel/types.hpp"

namespace duel {

// Exp4.P over a finite policy class with bandit feedback. Weights live in
// log-space with periodic renormalization. FullMapping classes are handled
// with one weight table per context, which is exactly equivalent to the
// per-policy update because both advice and updates factorize across
// contexts. p_min = sqrt(ln|Pi| / (K T)); the exp-update applies
// (p_min/2) (yhat + vhat sqrt(ln(|Pi|/delta) / (K T))).
//
// Horizons below K ln|Pi| make K p_min exceed 1; such states are flagged
// (horizon_flagged) and remain usable as long as every mixed probability
// stays positive, i.e. (K-1) p_min < 1. Smaller horizons throw.
class Exp4PState {
 public:
  Exp4PState(const PolicyClass& policy_class, std::int64_t horizon,
             double delta);

  // Expert constructor: explicit advice list (duplicates permitted), pinned
  // p_min and bonus, optional non-uniform initial log-weights.
  Exp4PState(int k, std::vector<Policy> advice, std::int64_t horizon,
             double delta, double p_min, double bonus,
             std::vector<double> initial_log_weights = {});

  // p(a) = (1 - K p_min) sum_pi w(pi) xi_pi(a) / sum_pi w(pi) + p_min.
  std::vector<double> action_distribution(int context) const;

  int act(int context, Rng& rng);
  void update(int context, int action, double r01);

  std::int64_t round() const { return round_; }
  std::int64_t horizon() const { return horizon_; }
  double p_min() const { return p_min_; }
  double bonus() const { return bonus_; }
  bool horizon_flagged() const { return horizon_flagged_; }
  bool factored() const { return factored_; }
  int k() const { return k_; }

  // Normalized weights over the advice list (list mode only).
  std::vector<double> policy_distribution() const;
  // Normalized per-context weight tables (factored mode only).
  std::vector<std::vector<double>> context_tables() const;

 private:
  void renormalize(std::vector<double>& log_weights);

  bool factored_;
  int k_;
  int contexts_;
  std::int64_t horizon_;
  std::int64_t round_ = 0;
  double delta_;
  double p_min_;
  double bonus_;
  double floor_;
  bool horizon_flagged_;
  std::vector<Policy> advice_;                    // list mode
  std::vector<double> log_weights_;               // list mode
  std::vector<std::vector<double>> log_tables_;   // factored mode
};

struct SparringOptions {
  // Materializes the full hypothetical duel table each round; the realized
  // outcome is the consumed (a_t, b_t) entry.
  bool analysis_mode = false;
};

struct SparringResult {
  std::vector<DuelRecord> transcript;
  std::vector<double> cumulative_regret;  // after each round
  // Row learner's distribution in force when it chose a_t (one entry per
  // round): per-policy weights in list mode, per-context tables in factored
  // mode.
  std::vector<std::vector<double>> row_policy_history;
  std::vector<std::vector<std::vector<double>>> row_table_history;
  std::vector<std::vector<std::vector<double>>> analysis_tables;
};

// Two independent Exp4.P copies spar: the row copy picks a_t, the column
// copy picks b_t, one real duel is played, the row copy is rewarded
// (r+1)/2 and the column copy (-r+1)/2.
SparringResult sparring_exp4p(const ContextualEnvironment& env,
                              const PolicyClass& policy_class, std::int64_t horizon,
                              double delta, std::uint64_t seed,
                              const SparringOptions& options = {});

// wbar = (1/m) sum_i w_i as an explicit PolicyMixture.
PolicyMixture online_to_batch(const std::vector<std::vector<double>>& history,
                              const PolicyClass& tabular_class);

// FullMapping variant: averages the per-context tables and materializes the
// product mixture over the enumerated class (every consumer of the result
// depends only on per-context marginals, for which this is exact).
PolicyMixture online_to_batch_factored(
    const std::vector<std::vector<std::vector<double>>>& table_history,
    const PolicyClass& full_mapping_class, std::int64_t cap = 10'000);

PolicyMixture online_to_batch(const SparringResult& result,
                              const PolicyClass& policy_class,
                              std::int64_t cap = 10'000);

}  // namespace duel

#endif  // DUEL_EXP4_HPP_
