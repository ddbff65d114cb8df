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

#include "duel/exp4.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "duel/error.hpp"

namespace duel {
namespace {

constexpr double kLogWeightCeiling = 500.0;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw BadParams("delta must lie in (0, 1)");
  }
}

std::vector<double> softmax(const std::vector<double>& log_weights) {
  double top = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) top = std::max(top, lw);
  std::vector<double> out(log_weights.size());
  double total = 0.0;
  for (std::size_t j = 0; j < log_weights.size(); ++j) {
    out[j] = std::exp(log_weights[j] - top);
    total += out[j];
  }
  for (double& v : out) v /= total;
  return out;
}

int sample_from(const std::vector<double>& p, Rng& rng) {
  const double u = rng.next_unit();
  double cumulative = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    cumulative += p[a];
    if (u < cumulative) return static_cast<int>(a);
  }
  for (std::size_t a = p.size(); a-- > 0;) {
    if (p[a] > 0.0) return static_cast<int>(a);
  }
  throw InvalidDistribution("action distribution sums to zero");
}

}  // namespace

Exp4PState::Exp4PState(const PolicyClass& policy_class, std::int64_t horizon,
                       double delta)
    : factored_(policy_class.kind() == PolicyClass::Kind::kFullMapping),
      k_(policy_class.k()),
      contexts_(policy_class.contexts()),
      horizon_(horizon),
      delta_(delta) {
  check_delta(delta);
  if (horizon < 1) throw BadParams("horizon must be positive");
  const double log_size = policy_class.log_size();
  const double kt = static_cast<double>(k_) * static_cast<double>(horizon);
  p_min_ = std::sqrt(log_size / kt);
  bonus_ = std::sqrt((log_size - std::log(delta)) / kt);
  horizon_flagged_ = k_ * p_min_ > 1.0;
  floor_ = std::min(p_min_, 1.0 - (k_ - 1) * p_min_);
  if (!(1.0 - (k_ - 1) * p_min_ > 0.0)) {
    throw HorizonExceeded("horizon too small: mixed probabilities vanish");
  }
  if (factored_) {
    log_tables_.assign(contexts_, std::vector<double>(k_, 0.0));
  } else {
    advice_ = policy_class.tabular_policies();
    log_weights_.assign(advice_.size(), 0.0);
  }
}

Exp4PState::Exp4PState(int k, std::vector<Policy> advice, std::int64_t horizon,
                       double delta, double p_min, double bonus,
                       std::vector<double> initial_log_weights)
    : factored_(false),
      k_(k),
      contexts_(0),
      horizon_(horizon),
      delta_(delta),
      p_min_(p_min),
      bonus_(bonus),
      advice_(std::move(advice)) {
  check_delta(delta);
  if (horizon < 1) throw BadParams("horizon must be positive");
  if (advice_.empty()) throw BadParams("advice list is empty");
  if (k < 1) throw BadParams("arm count must be positive");
  if (!(p_min >= 0.0) || !(bonus >= 0.0)) {
    throw BadParams("p_min and bonus must be nonnegative");
  }
  for (const Policy& pi : advice_) {
    if (pi.k() != k) throw DimensionMismatch("advice arm count mismatch");
  }
  horizon_flagged_ = k_ * p_min_ > 1.0;
  floor_ = std::min(p_min_, 1.0 - (k_ - 1) * p_min_);
  if (!(1.0 - (k_ - 1) * p_min_ > 0.0)) {
    throw HorizonExceeded("horizon too small: mixed probabilities vanish");
  }
  if (initial_log_weights.empty()) {
    log_weights_.assign(advice_.size(), 0.0);
  } else {
    if (initial_log_weights.size() != advice_.size()) {
      throw DimensionMismatch("initial log-weight count mismatch");
    }
    log_weights_ = std::move(initial_log_weights);
  }
}

std::vector<double> Exp4PState::action_distribution(int context) const {
  std::vector<double> q(k_, 0.0);
  if (factored_) {
    if (context < 0 || context >= contexts_) {
      throw DimensionMismatch("context index out of range");
    }
    q = softmax(log_tables_[context]);
  } else {
    const std::vector<double> w = softmax(log_weights_);
    for (std::size_t j = 0; j < advice_.size(); ++j) {
      q[advice_[j].action(context)] += w[j];
    }
  }
  std::vector<double> p(k_);
  for (int a = 0; a < k_; ++a) {
    p[a] = (1.0 - k_ * p_min_) * q[a] + p_min_;
  }
  return p;
}

int Exp4PState::act(int context, Rng& rng) {
  if (round_ >= horizon_) {
    throw HorizonExceeded("act called past the configured horizon");
  }
  return sample_from(action_distribution(context), rng);
}

void Exp4PState::update(int context, int action, double r01) {
  if (round_ >= horizon_) {
    throw HorizonExceeded("update called past the configured horizon");
  }
  if (action < 0 || action >= k_) {
    throw DimensionMismatch("action index out of range");
  }
  if (!(r01 >= 0.0 && r01 <= 1.0)) {
    throw RangeViolation(action, action, r01);
  }
  const std::vector<double> p = action_distribution(context);
  if (p[action] < floor_ - 1e-12 || p[action] <= 0.0) {
    throw ProbabilityUnderflow("played action fell below the exploration floor");
  }
  const double rhat = r01 / p[action];
  const double step = p_min_ / 2.0;
  std::vector<double> inv_p(k_);
  for (int a = 0; a < k_; ++a) inv_p[a] = 1.0 / p[a];
  if (factored_) {
    auto& row = log_tables_[context];
    for (int a = 0; a < k_; ++a) {
      const double yhat = a == action ? rhat : 0.0;
      row[a] += step * (yhat + bonus_ * inv_p[a]);
    }
    renormalize(row);
  } else {
    for (std::size_t j = 0; j < advice_.size(); ++j) {
      const int a = advice_[j].action(context);
      const double yhat = a == action ? rhat : 0.0;
      log_weights_[j] += step * (yhat + bonus_ * inv_p[a]);
    }
    renormalize(log_weights_);
  }
  ++round_;
}

std::vector<double> Exp4PState::policy_distribution() const {
  if (factored_) throw BadParams("policy_distribution needs list mode");
  return softmax(log_weights_);
}

std::vector<std::vector<double>> Exp4PState::context_tables() const {
  if (!factored_) throw BadParams("context_tables needs factored mode");
  std::vector<std::vector<double>> out(contexts_);
  for (int s = 0; s < contexts_; ++s) out[s] = softmax(log_tables_[s]);
  return out;
}

void Exp4PState::renormalize(std::vector<double>& log_weights) {
  double top = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) top = std::max(top, lw);
  if (top > kLogWeightCeiling) {
    for (double& lw : log_weights) lw -= top;
  }
}

SparringResult sparring_exp4p(const ContextualEnvironment& env,
                              const PolicyClass& policy_class, std::int64_t horizon,
                              double delta, std::uint64_t seed,
                              const SparringOptions& options) {
  if (policy_class.k() != env.k()) {
    throw DimensionMismatch("policy class and environment arm counts differ");
  }
  if (policy_class.kind() == PolicyClass::Kind::kFullMapping &&
      policy_class.contexts() != env.contexts()) {
    throw DimensionMismatch("policy class and environment context counts differ");
  }
  Rng context_rng = Rng::stream(seed, streams::kSparringContexts);
  Rng duel_rng = Rng::stream(seed, streams::kSparringDuels);
  Rng row_rng = Rng::stream(seed, streams::kSparringRow);
  Rng col_rng = Rng::stream(seed, streams::kSparringCol);
  Rng analysis_rng = Rng::stream(seed, streams::kSparringAnalysis);

  Exp4PState row(policy_class, horizon, delta);
  Exp4PState col(policy_class, horizon, delta);
  const int k = env.k();
  const int contexts = env.contexts();
  const bool factored = row.factored();

  SparringResult result;
  result.transcript.reserve(static_cast<std::size_t>(horizon));
  result.cumulative_regret.reserve(static_cast<std::size_t>(horizon));

  // Running per-context scores: partial[s][a] = sum over rounds with context
  // s of (P_s(a, a_t) + P_s(a, b_t)) / 2. The best-in-class cumulative score
  // is a sum of per-context maxima (FullMapping) or a per-policy maximum
  // (tabular); the realized mixed score is zero by skew-symmetry.
  std::vector<std::vector<double>> partial(contexts, std::vector<double>(k, 0.0));
  std::vector<double> context_best(contexts, 0.0);
  double best_total = 0.0;
  std::vector<Policy> tab_policies;
  std::vector<double> tab_scores;
  if (!factored) {
    tab_policies = policy_class.tabular_policies();
    tab_scores.assign(tab_policies.size(), 0.0);
  }

  for (std::int64_t t = 0; t < horizon; ++t) {
    const int s = sample_round(env, context_rng);
    if (factored) {
      result.row_table_history.push_back(row.context_tables());
    } else {
      result.row_policy_history.push_back(row.policy_distribution());
    }
    const int a = row.act(s, row_rng);
    const int b = col.act(s, col_rng);

    int r;
    if (options.analysis_mode) {
      // Hypothetical duel table: independent outcomes above the diagonal,
      // mirrored below, fair coins on the diagonal. The realized outcome is
      // the consumed entry.
      std::vector<std::vector<int>> table(k, std::vector<int>(k, 0));
      for (int i = 0; i < k; ++i) {
        table[i][i] = analysis_rng.next_unit() < 0.5 ? 1 : -1;
        for (int j = i + 1; j < k; ++j) {
          const double win = (env.matrix(s).entry(i, j) + 1.0) / 2.0;
          table[i][j] = analysis_rng.next_unit() < win ? 1 : -1;
          table[j][i] = -table[i][j];
        }
      }
      r = table[a][b];
      std::vector<std::vector<double>> dense(k, std::vector<double>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) dense[i][j] = table[i][j];
      result.analysis_tables.push_back(std::move(dense));
    } else {
      r = duel(env, s, a, b, duel_rng);
    }

    row.update(s, a, (r + 1.0) / 2.0);
    col.update(s, b, (-r + 1.0) / 2.0);
    result.transcript.push_back(DuelRecord{t, s, a, b, r});

    const PreferenceMatrix& m = env.matrix(s);
    auto& part = partial[s];
    std::vector<double> inc(k);
    for (int arm = 0; arm < k; ++arm) {
      inc[arm] = 0.5 * (m.entry(arm, a) + m.entry(arm, b));
      part[arm] += inc[arm];
    }
    if (factored) {
      double row_best = part[0];
      for (int arm = 1; arm < k; ++arm) row_best = std::max(row_best, part[arm]);
      best_total += row_best - context_best[s];
      context_best[s] = row_best;
      result.cumulative_regret.push_back(best_total);
    } else {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < tab_policies.size(); ++j) {
        tab_scores[j] += inc[tab_policies[j].action(s)];
        best = std::max(best, tab_scores[j]);
      }
      result.cumulative_regret.push_back(best);
    }
  }
  return result;
}

PolicyMixture online_to_batch(const std::vector<std::vector<double>>& history,
                              const PolicyClass& tabular_class) {
  if (tabular_class.kind() != PolicyClass::Kind::kTabular) {
    throw BadParams("per-policy history needs a tabular class");
  }
  if (history.empty()) throw EmptyMixture("empty weight history");
  const std::vector<Policy>& policies = tabular_class.tabular_policies();
  std::vector<double> mean(policies.size(), 0.0);
  for (const auto& w : history) {
    if (w.size() != policies.size()) {
      throw DimensionMismatch("history width and class size differ");
    }
    for (std::size_t j = 0; j < w.size(); ++j) mean[j] += w[j];
  }
  std::vector<MixtureAtom> atoms;
  atoms.reserve(policies.size());
  for (std::size_t j = 0; j < policies.size(); ++j) {
    atoms.push_back(MixtureAtom{mean[j] / history.size(), policies[j]});
  }
  return mixture_normalize(atoms);
}

PolicyMixture online_to_batch_factored(
    const std::vector<std::vector<std::vector<double>>>& table_history,
    const PolicyClass& full_mapping_class, std::int64_t cap) {
  if (full_mapping_class.kind() != PolicyClass::Kind::kFullMapping) {
    throw BadParams("table history needs a full-mapping class");
  }
  if (table_history.empty()) throw EmptyMixture("empty table history");
  const int contexts = full_mapping_class.contexts();
  const int k = full_mapping_class.k();
  std::vector<std::vector<double>> marginal(contexts, std::vector<double>(k, 0.0));
  for (const auto& tables : table_history) {
    if (static_cast<int>(tables.size()) != contexts) {
      throw DimensionMismatch("table history context count differs");
    }
    for (int s = 0; s < contexts; ++s) {
      if (static_cast<int>(tables[s].size()) != k) {
        throw DimensionMismatch("table history arm count differs");
      }
      for (int a = 0; a < k; ++a) marginal[s][a] += tables[s][a];
    }
  }
  for (auto& row : marginal) {
    for (double& v : row) v /= table_history.size();
  }
  const std::int64_t count = full_mapping_class.enumeration_count(cap);
  std::vector<MixtureAtom> atoms;
  atoms.reserve(static_cast<std::size_t>(count));
  for (std::int64_t index = 0; index < count; ++index) {
    Policy pi = full_mapping_class.policy_at(index);
    double w = 1.0;
    for (int s = 0; s < contexts; ++s) w *= marginal[s][pi.action(s)];
    atoms.push_back(MixtureAtom{w, std::move(pi)});
  }
  return mixture_normalize(atoms);
}

PolicyMixture online_to_batch(const SparringResult& result,
                              const PolicyClass& policy_class,
                              std::int64_t cap) {
  if (policy_class.kind() == PolicyClass::Kind::kFullMapping) {
    return online_to_batch_factored(result.row_table_history, policy_class, cap);
  }
  return online_to_batch(result.row_policy_history, policy_class);
}

}  // namespace duel
