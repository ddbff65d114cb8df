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

#include "duel/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace duel {

namespace {

std::vector<std::vector<double>> zero_matrix(int k) {
  return std::vector<std::vector<double>>(k, std::vector<double>(k, 0.0));
}

PreferenceMatrix cycle_matrix(int k) {
  auto entries = zero_matrix(k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      const int d = ((b - a) % k + k) % k;
      if (2 * d < k) {
        entries[a][b] = 1.0;
      } else if (2 * d > k) {
        entries[a][b] = -1.0;
      }
    }
  }
  return validate_preference_matrix(entries);
}

PreferenceMatrix condorcet_matrix(int k) {
  auto entries = zero_matrix(k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a < b) entries[a][b] = 0.5;
      if (a > b) entries[a][b] = -0.5;
    }
  }
  return validate_preference_matrix(entries);
}

// k+4 arms: a1, a2, a3 form a cycle at +-1 and each beats the k rest arms;
// rest arms tie each other; a0 duplicates a1's row (and so ties a1).
PreferenceMatrix clone_matrix(int rest_arms) {
  const int k = rest_arms + 4;
  auto entries = zero_matrix(k);
  const auto set = [&entries](int a, int b, double v) {
    entries[a][b] = v;
    entries[b][a] = -v;
  };
  set(1, 2, 1.0);
  set(2, 3, 1.0);
  set(3, 1, 1.0);
  for (int r = 4; r < k; ++r) {
    for (int top = 1; top <= 3; ++top) set(top, r, 1.0);
  }
  set(0, 2, 1.0);
  set(0, 3, -1.0);
  for (int r = 4; r < k; ++r) set(0, r, 1.0);
  return validate_preference_matrix(entries);
}

PreferenceMatrix appendix_b_matrix() {
  return validate_preference_matrix({
      {0.0, 0.5, -0.5, 0.5, -0.95},
      {-0.5, 0.0, 0.5, -0.2, 0.5},
      {0.5, -0.5, 0.0, -0.2, 0.5},
      {-0.5, 0.2, 0.2, 0.0, 0.5},
      {0.95, -0.5, -0.5, -0.5, 0.0},
  });
}

PreferenceMatrix random_skew_matrix(int k, Rng& rng) {
  auto entries = zero_matrix(k);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const double v = 2.0 * rng.next_unit() - 1.0;
      entries[a][b] = v;
      entries[b][a] = -v;
    }
  }
  return validate_preference_matrix(entries);
}

PreferenceMatrix utility_matrix(const std::vector<double>& utility) {
  const int k = static_cast<int>(utility.size());
  auto entries = zero_matrix(k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      entries[a][b] = std::clamp(utility[a] - utility[b], -1.0, 1.0);
    }
  }
  return validate_preference_matrix(entries);
}

PreferenceMatrix single_matrix(const EnvSpec& spec, Rng& rng) {
  if (spec.kind == "cycle") {
    if (spec.k < 1) throw BadParams("cycle needs k >= 1");
    return cycle_matrix(spec.k);
  }
  if (spec.kind == "condorcet") {
    if (spec.k < 1) throw BadParams("condorcet needs k >= 1");
    return condorcet_matrix(spec.k);
  }
  if (spec.kind == "clone") {
    if (spec.k < 1) throw BadParams("clone needs k >= 1 rest arms");
    return clone_matrix(spec.k);
  }
  if (spec.kind == "appendix_b_5arm") return appendix_b_matrix();
  if (spec.kind == "random_skew") {
    if (spec.k < 1) throw BadParams("random_skew needs k >= 1");
    return random_skew_matrix(spec.k, rng);
  }
  if (spec.kind == "utility") {
    if (spec.utility.empty()) throw BadParams("utility needs a value per arm");
    return utility_matrix(spec.utility);
  }
  throw BadParams("unknown environment kind '" + spec.kind + "'");
}

}  // namespace

ContextualEnvironment::ContextualEnvironment(std::vector<ContextEntry> contexts,
                                             std::uint64_t seed)
    : contexts_(std::move(contexts)), seed_(seed) {
  if (contexts_.empty()) throw BadParams("environment needs >= 1 context");
  double sum = 0.0;
  for (const ContextEntry& c : contexts_) {
    if (!(c.q >= 0.0)) throw BadParams("context probability must be >= 0");
    if (c.matrix.k() != k()) {
      throw DimensionMismatch("context matrices disagree on K");
    }
    sum += c.q;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw BadParams("context probabilities sum to " + std::to_string(sum));
  }
}

int sample_round(const ContextualEnvironment& env, Rng& rng) {
  const double u = rng.next_unit();
  double cumulative = 0.0;
  const int c = env.contexts();
  for (int s = 0; s < c; ++s) {
    cumulative += env.q(s);
    if (u < cumulative) return s;
  }
  for (int s = c - 1; s >= 0; --s) {
    if (env.q(s) > 0.0) return s;
  }
  return c - 1;
}

int duel(const ContextualEnvironment& env, int context, int a, int b,
         Rng& rng) {
  const PreferenceMatrix& p = env.matrix(context);
  if (a < 0 || a >= p.k() || b < 0 || b >= p.k()) {
    throw BadParams("duel actions out of range");
  }
  const double win = (p.entry(a, b) + 1.0) / 2.0;
  return rng.next_unit() < win ? 1 : -1;
}

MetaMatrix::MetaMatrix(std::vector<std::vector<double>> entries)
    : entries_(std::move(entries)) {}

PreferenceMatrix MetaMatrix::as_preference_matrix() const {
  return validate_preference_matrix(entries_);
}

MetaMatrix exact_meta_matrix(const ContextualEnvironment& env,
                             const PolicyClass& policy_class,
                             std::int64_t cap) {
  const std::int64_t n = policy_class.enumeration_count(cap);
  std::vector<Policy> policies;
  policies.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    policies.push_back(policy_class.policy_at(i));
  }
  std::vector<std::vector<double>> entries(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n; ++j) {
      double m = 0.0;
      for (int s = 0; s < env.contexts(); ++s) {
        m += env.q(s) *
             env.matrix(s).entry(policies[static_cast<std::size_t>(i)].action(s),
                                 policies[static_cast<std::size_t>(j)].action(s));
      }
      entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m;
      entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -m;
    }
  }
  return MetaMatrix(std::move(entries));
}

double regret(const ContextualEnvironment& env,
              const std::vector<DuelRecord>& ledger,
              const PolicyClass& policy_class) {
  if (ledger.empty()) throw BadParams("regret ledger must be non-empty");
  const int k = env.k();
  const int c = env.contexts();
  // partial[s][a] = (1/2) sum over rounds with context s of
  // P_s(a, a_t) + P_s(a, b_t).
  std::vector<std::vector<double>> partial(c, std::vector<double>(k, 0.0));
  for (const DuelRecord& rec : ledger) {
    const PreferenceMatrix& p = env.matrix(rec.context);
    for (int a = 0; a < k; ++a) {
      partial[rec.context][a] +=
          0.5 * (p.entry(a, rec.a) + p.entry(a, rec.b));
    }
  }
  if (policy_class.kind() == PolicyClass::Kind::kFullMapping) {
    double total = 0.0;
    for (int s = 0; s < c; ++s) {
      total += *std::max_element(partial[s].begin(), partial[s].end());
    }
    return total;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const Policy& pi : policy_class.tabular_policies()) {
    double g = 0.0;
    for (int s = 0; s < c; ++s) g += partial[s][pi.action(s)];
    best = std::max(best, g);
  }
  return best;
}

std::vector<double> regret_curve(const ContextualEnvironment& env,
                                 const std::vector<DuelRecord>& ledger,
                                 const PolicyClass& policy_class) {
  if (ledger.empty()) throw BadParams("regret ledger must be non-empty");
  const int k = env.k();
  const int c = env.contexts();
  const bool factored = policy_class.kind() == PolicyClass::Kind::kFullMapping;
  std::vector<std::vector<double>> partial(c, std::vector<double>(k, 0.0));
  std::vector<double> context_best(c, 0.0);
  double factored_total = 0.0;
  std::vector<Policy> policies;
  std::vector<double> scores;
  if (!factored) {
    policies = policy_class.tabular_policies();
    scores.assign(policies.size(), 0.0);
  }
  std::vector<double> curve;
  curve.reserve(ledger.size());
  for (const DuelRecord& rec : ledger) {
    const PreferenceMatrix& p = env.matrix(rec.context);
    auto& part = partial[rec.context];
    std::vector<double> inc(k);
    for (int a = 0; a < k; ++a) {
      inc[a] = 0.5 * (p.entry(a, rec.a) + p.entry(a, rec.b));
      part[a] += inc[a];
    }
    if (factored) {
      const double row_best = *std::max_element(part.begin(), part.end());
      factored_total += row_best - context_best[rec.context];
      context_best[rec.context] = row_best;
      curve.push_back(factored_total);
    } else {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < policies.size(); ++j) {
        scores[j] += inc[policies[j].action(rec.context)];
        best = std::max(best, scores[j]);
      }
      curve.push_back(best);
    }
  }
  return curve;
}

ContextualEnvironment make_environment(const EnvSpec& spec, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, streams::kEnvGenerator);
  if (spec.kind == "composite") {
    if (spec.components.empty()) {
      throw BadParams("composite needs >= 1 component");
    }
    if (spec.q.size() != spec.components.size()) {
      throw BadParams("composite needs one q per component");
    }
    std::vector<ContextEntry> contexts;
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
      if (spec.components[i].kind == "composite") {
        throw BadParams("composite components must be single-context");
      }
      Rng sub = Rng::stream(seed, streams::kEnvGenerator + 16 + i);
      contexts.push_back({spec.q[i], single_matrix(spec.components[i], sub)});
    }
    return ContextualEnvironment(std::move(contexts), seed);
  }
  std::vector<ContextEntry> contexts;
  contexts.push_back({1.0, single_matrix(spec, rng)});
  return ContextualEnvironment(std::move(contexts), seed);
}

}  // namespace duel
