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

#ifndef DUEL_SOLVERS_HPP_
#define DUEL_SOLVERS_HPP_

#include <cstdint>
#include <vector>

#include "duel/batch.hpp"
#include "duel/rng.hpp"
#include "duel/types.hpp"

namespace duel {

// Point in the convex hull of the policy embeddings {v_pi}. The dense
// embedding is determined by per-context action marginals:
// dense(i K + a) = marginal[x_i][a] / sqrt(m). Atoms carry an explicit
// convex decomposition over vertices for mixture extraction.
struct HullPoint {
  std::vector<MixtureAtom> atoms;
  std::vector<std::vector<double>> marginal;
  std::vector<double> dense;
};

HullPoint hull_vertex(const BlockGame& game, const Policy& policy);
HullPoint hull_from_atoms(const BlockGame& game,
                          const std::vector<MixtureAtom>& atoms);

struct SolverReport {
  std::int64_t oracle_calls = 0;
  std::int64_t rounds = 0;        // N (sparring) or N_out (descent)
  std::int64_t inner_rounds = 0;  // descent only
  double step = 0.0;              // alpha (sparring) or eta (descent)
  double guarantee = 0.0;         // a-priori epsilon bound at these settings
  double l_bound = 0.0;
};

// N = ceil(36 L^2 / eps^2), the round count at which both solvers'
// guarantees reach eps.
std::int64_t guarantee_rounds(double l_bound, double eps);

// Empirical scale of the estimated meta-game: max(1, max |Mhat(pi, rho)|)
// over the enumerated class. Clamped below by 1 so step sizes stay sane on
// near-zero games.
double empirical_l(const BlockGame& game, const PolicyClass& policy_class,
                   std::int64_t cap = 10'000);

double fpl_alpha(double l_bound, std::int64_t n_rounds);
double fpl_gamma(double l_bound, int m, std::int64_t n_rounds, double delta);
double pgd_eta(double l_bound, std::int64_t n_outer);
double pgd_epsilon(double l_bound, std::int64_t n_outer, std::int64_t n_inner);

// Two follow-the-perturbed-leader copies spar on the estimated game. Round
// t plays w_t = oracle(-B sum_{j<t} u_j + p_t) against
// u_t = oracle(B^T sum_{j<t} w_j + q_t), with p_t, q_t fresh uniform draws
// from [0, 1/alpha)^{mK} and alpha = sqrt(2 / (L^2 N)). The returned
// mixtures are uniform over each player's N chosen vertices; the high
// probability margin guarantee is gamma = 2 L sqrt(2 m / N)
// + 2 L sqrt(2 ln(2 / delta) / N). Exactly 2N oracle calls.
struct FplResult {
  PolicyMixture row_mixture;
  PolicyMixture col_mixture;
  SolverReport report;
};

FplResult sparring_fpl(const BlockGame& game, ClassificationOracle& oracle,
                       std::int64_t n_rounds, double l_bound, double delta,
                       std::uint64_t seed);

// Iteratively projected gradient ascent on w -> min_u w^T B u. Starts from
// the zero-cost oracle vertex; each step plays u_t = oracle(B^T w_t), moves
// to z = w_t + eta B u_t with eta = 2 / (L sqrt(N_out)), and approximately
// projects z back onto the hull. Returns the average of the iterates. The
// guarantee is eps = 2 L / sqrt(N_out) + L alpha / 2 with alpha =
// 8 / sqrt(N_in); at most N_out (1 + N_in) + 1 oracle calls (projections of
// points already in the hull are free).
struct PgdResult {
  PolicyMixture mixture;
  SolverReport report;
};

PgdResult projected_gd(const BlockGame& game, ClassificationOracle& oracle,
                       std::int64_t n_outer, std::int64_t n_inner,
                       double l_bound);

// Frank-Wolfe sweep toward z with the fixed step nu = ||z - start|| /
// sqrt(N_in) (clamped to 1, which the guarantee sizing never reaches):
// v_{t+1} = (1 - nu) v_t + nu oracle(v_t - z), returning the average of
// v_1 .. v_{N_in}. The result vbar satisfies, against the true projection p,
// ||vbar - z||^2 <= ||p - z||^2 + (8 / sqrt(N_in)) ||start - z||. If z is
// already start, returns start with zero oracle calls.
HullPoint approx_project(const BlockGame& game, ClassificationOracle& oracle,
                         const std::vector<double>& z, const HullPoint& start,
                         std::int64_t n_inner);

}  // namespace duel

#endif  // DUEL_SOLVERS_HPP_
