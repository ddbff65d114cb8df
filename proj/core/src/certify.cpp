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

#include "duel/certify.hpp"

#include <algorithm>
#include <vector>

#include "duel/error.hpp"

namespace duel {

Certificate certify(const ContextualEnvironment& env,
                    const PolicyClass& policy_class,
                    const PolicyMixture& mixture, double epsilon,
                    std::int64_t cap) {
  if (!(epsilon >= 0.0)) throw BadParams("epsilon must be nonnegative");
  if (policy_class.k() != env.k()) {
    throw DimensionMismatch("policy class and environment arm counts differ");
  }
  const int contexts = env.contexts();
  const int k = env.k();
  for (const MixtureAtom& atom : mixture.atoms()) {
    if (atom.policy.k() != k || atom.policy.contexts() != contexts) {
      throw DimensionMismatch("mixture atom and environment shapes differ");
    }
    if (policy_class.kind() == PolicyClass::Kind::kTabular) {
      const auto& members = policy_class.tabular_policies();
      if (std::find(members.begin(), members.end(), atom.policy) ==
          members.end()) {
        throw BadParams("mixture atom outside the policy class");
      }
    } else if (policy_class.contexts() != contexts) {
      throw DimensionMismatch("policy class and environment context counts differ");
    }
  }

  // col_cost[s][b] = q_s sum_pi w(pi) P_s(pi(s), b); the mixture's payoff
  // against any pure rho is sum_s col_cost[s][rho(s)].
  std::vector<std::vector<double>> col_cost(contexts,
                                            std::vector<double>(k, 0.0));
  for (int s = 0; s < contexts; ++s) {
    const PreferenceMatrix& p = env.matrix(s);
    const double q = env.q(s);
    for (const MixtureAtom& atom : mixture.atoms()) {
      const int a = atom.policy.action(s);
      for (int b = 0; b < k; ++b) {
        col_cost[s][b] += q * atom.weight * p.entry(a, b);
      }
    }
  }

  Certificate cert;
  cert.epsilon = epsilon;
  cert.class_count = policy_class.enumeration_count(cap);
  if (policy_class.kind() == PolicyClass::Kind::kFullMapping) {
    cert.mode = "factored";
    double margin = 0.0;
    std::vector<int> worst(contexts, 0);
    for (int s = 0; s < contexts; ++s) {
      int best = 0;
      for (int b = 1; b < k; ++b) {
        if (col_cost[s][b] < col_cost[s][best]) best = b;
      }
      worst[s] = best;
      margin += col_cost[s][best];
    }
    cert.margin = margin;
    cert.worst_policy = Policy(worst, k);
  } else {
    const auto& members = policy_class.tabular_policies();
    double margin = 0.0;
    std::size_t worst = 0;
    for (std::size_t j = 0; j < members.size(); ++j) {
      double value = 0.0;
      for (int s = 0; s < contexts; ++s) {
        value += col_cost[s][members[j].action(s)];
      }
      if (j == 0 || value < margin) {
        margin = value;
        worst = j;
      }
    }
    cert.margin = margin;
    cert.worst_policy = members[worst];
  }
  cert.certified = cert.margin >= -epsilon;
  return cert;
}

}  // namespace duel
