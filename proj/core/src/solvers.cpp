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

#include "duel/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "duel/error.hpp"

namespace duel {
namespace {

constexpr double kScaleFloor = 1e-200;
constexpr double kTinyWeight = 1e-12;

// Output pruning: atoms this light are floating-point lint from long runs of
// geometric rescaling. Kept as-is if everything is tiny.
std::vector<MixtureAtom> prune_tiny(std::vector<MixtureAtom> atoms) {
  std::vector<MixtureAtom> kept;
  kept.reserve(atoms.size());
  for (MixtureAtom& atom : atoms) {
    if (atom.weight >= kTinyWeight) kept.push_back(std::move(atom));
  }
  if (kept.empty()) return atoms;
  return kept;
}

std::vector<int> context_counts(const BlockGame& game) {
  std::vector<int> counts(game.contexts, 0);
  for (int c : game.record_context) ++counts[c];
  return counts;
}

std::vector<double> dense_from_marginal(
    const BlockGame& game, const std::vector<std::vector<double>>& marginal) {
  const double unit = 1.0 / std::sqrt(static_cast<double>(game.m));
  std::vector<double> dense(static_cast<std::size_t>(game.m) * game.k, 0.0);
  for (int i = 0; i < game.m; ++i) {
    const auto& row = marginal[game.record_context[i]];
    const std::size_t base = static_cast<std::size_t>(i) * game.k;
    for (int a = 0; a < game.k; ++a) dense[base + a] = unit * row[a];
  }
  return dense;
}

// agg[s][a] = sum_{i: x_i = s} z(i K + a) / sqrt(m), so that for any policy
// pi, z . v_pi = sum_s agg[s][pi(s)].
std::vector<std::vector<double>> aggregate_dense(const BlockGame& game,
                                                 const std::vector<double>& z) {
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  if (z.size() != dim) throw DimensionMismatch("vector length and mK differ");
  const double unit = 1.0 / std::sqrt(static_cast<double>(game.m));
  std::vector<std::vector<double>> agg(game.contexts,
                                       std::vector<double>(game.k, 0.0));
  for (int i = 0; i < game.m; ++i) {
    auto& row = agg[game.record_context[i]];
    const std::size_t base = static_cast<std::size_t>(i) * game.k;
    for (int a = 0; a < game.k; ++a) row[a] += unit * z[base + a];
  }
  return agg;
}

void check_rounds(std::int64_t n, const char* what) {
  if (n < 1) throw BadParams(std::string(what) + " must be positive");
}

void check_l_bound(double l_bound) {
  if (!(l_bound > 0.0)) throw BadParams("scale bound must be positive");
}

}  // namespace

HullPoint hull_vertex(const BlockGame& game, const Policy& policy) {
  return hull_from_atoms(game, {MixtureAtom{1.0, policy}});
}

HullPoint hull_from_atoms(const BlockGame& game,
                          const std::vector<MixtureAtom>& atoms) {
  PolicyMixture mixture = mixture_normalize(atoms);
  HullPoint point;
  point.marginal.assign(game.contexts, std::vector<double>(game.k, 0.0));
  for (const MixtureAtom& atom : mixture.atoms()) {
    if (atom.policy.k() != game.k ||
        atom.policy.contexts() != game.contexts) {
      throw DimensionMismatch("atom policy and game shapes differ");
    }
    for (int s = 0; s < game.contexts; ++s) {
      point.marginal[s][atom.policy.action(s)] += atom.weight;
    }
  }
  point.atoms = mixture.atoms();
  point.dense = dense_from_marginal(game, point.marginal);
  return point;
}

std::int64_t guarantee_rounds(double l_bound, double eps) {
  check_l_bound(l_bound);
  if (!(eps > 0.0)) throw BadParams("target epsilon must be positive");
  return static_cast<std::int64_t>(std::ceil(36.0 * l_bound * l_bound / (eps * eps)));
}

double empirical_l(const BlockGame& game, const PolicyClass& policy_class,
                   std::int64_t cap) {
  const std::vector<std::vector<double>> mhat = mhat_matrix(game, policy_class, cap);
  double top = 0.0;
  for (const auto& row : mhat) {
    for (double v : row) top = std::max(top, std::abs(v));
  }
  return std::max(1.0, top);
}

double fpl_alpha(double l_bound, std::int64_t n_rounds) {
  check_l_bound(l_bound);
  check_rounds(n_rounds, "round count");
  return std::sqrt(2.0 / (l_bound * l_bound * static_cast<double>(n_rounds)));
}

double fpl_gamma(double l_bound, int m, std::int64_t n_rounds, double delta) {
  check_l_bound(l_bound);
  check_rounds(n_rounds, "round count");
  if (m < 1) throw BadParams("sample count must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw BadParams("delta must lie in (0, 1)");
  const double n = static_cast<double>(n_rounds);
  return 2.0 * l_bound * std::sqrt(2.0 * m / n) +
         2.0 * l_bound * std::sqrt(2.0 * std::log(2.0 / delta) / n);
}

double pgd_eta(double l_bound, std::int64_t n_outer) {
  check_l_bound(l_bound);
  check_rounds(n_outer, "outer round count");
  return 2.0 / (l_bound * std::sqrt(static_cast<double>(n_outer)));
}

double pgd_epsilon(double l_bound, std::int64_t n_outer, std::int64_t n_inner) {
  check_l_bound(l_bound);
  check_rounds(n_outer, "outer round count");
  check_rounds(n_inner, "inner round count");
  const double alpha = 8.0 / std::sqrt(static_cast<double>(n_inner));
  return 2.0 * l_bound / std::sqrt(static_cast<double>(n_outer)) +
         l_bound * alpha / 2.0;
}

FplResult sparring_fpl(const BlockGame& game, ClassificationOracle& oracle,
                       std::int64_t n_rounds, double l_bound, double delta,
                       std::uint64_t seed) {
  check_rounds(n_rounds, "round count");
  const double alpha = fpl_alpha(l_bound, n_rounds);
  if (!(delta > 0.0 && delta < 1.0)) throw BadParams("delta must lie in (0, 1)");
  if (oracle.k() != game.k || oracle.contexts() != game.contexts) {
    throw DimensionMismatch("oracle and game shapes differ");
  }
  Rng rng = Rng::stream(seed, streams::kSolverPerturbations);
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  const double unit = 1.0 / std::sqrt(static_cast<double>(game.m));
  const double scale = 1.0 / alpha;

  std::vector<double> cum_bu(dim, 0.0);   // B (u_1 + ... + u_{t-1})
  std::vector<double> cum_btw(dim, 0.0);  // B^T (w_1 + ... + w_{t-1})
  std::vector<double> cost(dim, 0.0);
  std::map<std::vector<int>, double> row_counts;
  std::map<std::vector<int>, double> col_counts;
  const std::int64_t calls_before = oracle.calls();

  for (std::int64_t t = 0; t < n_rounds; ++t) {
    for (std::size_t idx = 0; idx < dim; ++idx) {
      cost[idx] = -cum_bu[idx] + scale * rng.next_unit();
    }
    const Policy w = oracle.argmin(cost);
    for (std::size_t idx = 0; idx < dim; ++idx) {
      cost[idx] = cum_btw[idx] + scale * rng.next_unit();
    }
    const Policy u = oracle.argmin(cost);
    row_counts[w.actions()] += 1.0;
    col_counts[u.actions()] += 1.0;
    for (int i = 0; i < game.m; ++i) {
      const EstimatorBlock& blk = game.blocks[i];
      const int s = game.record_context[i];
      const std::size_t base = static_cast<std::size_t>(i) * game.k;
      if (u.action(s) == blk.b) cum_bu[base + blk.a] += blk.value * unit;
      if (w.action(s) == blk.a) cum_btw[base + blk.b] += blk.value * unit;
    }
  }

  auto to_mixture = [&](const std::map<std::vector<int>, double>& counts) {
    std::vector<MixtureAtom> atoms;
    atoms.reserve(counts.size());
    for (const auto& [actions, count] : counts) {
      atoms.push_back(MixtureAtom{count / static_cast<double>(n_rounds),
                                  Policy(actions, game.k)});
    }
    return mixture_normalize(prune_tiny(std::move(atoms)));
  };

  FplResult result{to_mixture(row_counts), to_mixture(col_counts), {}};
  result.report.oracle_calls = oracle.calls() - calls_before;
  result.report.rounds = n_rounds;
  result.report.step = alpha;
  result.report.guarantee = fpl_gamma(l_bound, game.m, n_rounds, delta);
  result.report.l_bound = l_bound;
  return result;
}

HullPoint approx_project(const BlockGame& game, ClassificationOracle& oracle,
                         const std::vector<double>& z, const HullPoint& start,
                         std::int64_t n_inner) {
  check_rounds(n_inner, "inner round count");
  const std::size_t dim = static_cast<std::size_t>(game.m) * game.k;
  if (z.size() != dim || start.dense.size() != dim) {
    throw DimensionMismatch("vector length and mK differ");
  }
  double dist_sq = 0.0;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const double d = z[idx] - start.dense[idx];
    dist_sq += d * d;
  }
  const double dist = std::sqrt(dist_sq);
  if (dist == 0.0) return start;

  const double nu = std::min(1.0, dist / std::sqrt(static_cast<double>(n_inner)));
  const std::vector<std::vector<double>> agg_z = aggregate_dense(game, z);
  const std::vector<int> counts = context_counts(game);

  // Current iterate v_t: marginals plus a lazily scaled atom map
  // (actual weight = g * stored weight).
  std::vector<std::vector<double>> marg = start.marginal;
  std::map<std::vector<int>, double> atoms;
  for (const MixtureAtom& atom : start.atoms) {
    atoms[atom.policy.actions()] += atom.weight;
  }
  double g = 1.0;
  std::map<std::vector<int>, double> vbar;
  std::vector<std::vector<double>> cost(game.contexts,
                                        std::vector<double>(game.k, 0.0));
  const double inv_n = 1.0 / static_cast<double>(n_inner);

  for (std::int64_t t = 0; t < n_inner; ++t) {
    for (const auto& [actions, weight] : atoms) {
      vbar[actions] += g * weight * inv_n;
    }
    for (int s = 0; s < game.contexts; ++s) {
      const double frac = static_cast<double>(counts[s]) / game.m;
      for (int a = 0; a < game.k; ++a) {
        cost[s][a] = frac * marg[s][a] - agg_z[s][a];
      }
    }
    const Policy vertex = oracle.argmin_aggregated(cost);
    if (nu == 1.0) {
      atoms.clear();
      g = 1.0;
      atoms[vertex.actions()] = 1.0;
    } else {
      g *= 1.0 - nu;
      if (g < kScaleFloor) {
        for (auto& [actions, weight] : atoms) weight *= g;
        g = 1.0;
      }
      atoms[vertex.actions()] += nu / g;
    }
    for (int s = 0; s < game.contexts; ++s) {
      for (int a = 0; a < game.k; ++a) marg[s][a] *= 1.0 - nu;
      marg[s][vertex.action(s)] += nu;
    }
  }

  std::vector<MixtureAtom> result_atoms;
  result_atoms.reserve(vbar.size());
  for (const auto& [actions, weight] : vbar) {
    result_atoms.push_back(MixtureAtom{weight, Policy(actions, game.k)});
  }
  return hull_from_atoms(game, prune_tiny(std::move(result_atoms)));
}

PgdResult projected_gd(const BlockGame& game, ClassificationOracle& oracle,
                       std::int64_t n_outer, std::int64_t n_inner,
                       double l_bound) {
  check_rounds(n_outer, "outer round count");
  check_rounds(n_inner, "inner round count");
  const double eta = pgd_eta(l_bound, n_outer);
  if (oracle.k() != game.k || oracle.contexts() != game.contexts) {
    throw DimensionMismatch("oracle and game shapes differ");
  }
  const std::int64_t calls_before = oracle.calls();
  const double unit = 1.0 / std::sqrt(static_cast<double>(game.m));

  std::vector<std::vector<double>> zero(game.contexts,
                                        std::vector<double>(game.k, 0.0));
  HullPoint w = hull_vertex(game, oracle.argmin_aggregated(zero));

  std::map<std::vector<int>, double> avg;
  const double inv_n = 1.0 / static_cast<double>(n_outer);
  std::vector<std::vector<double>> cost(game.contexts,
                                        std::vector<double>(game.k, 0.0));
  std::vector<double> z(static_cast<std::size_t>(game.m) * game.k, 0.0);

  for (std::int64_t t = 0; t < n_outer; ++t) {
    for (const MixtureAtom& atom : w.atoms) {
      avg[atom.policy.actions()] += atom.weight * inv_n;
    }
    // Column best response to w: cost = B^T w aggregated per context.
    for (auto& row : cost) std::fill(row.begin(), row.end(), 0.0);
    for (int i = 0; i < game.m; ++i) {
      const EstimatorBlock& blk = game.blocks[i];
      const int s = game.record_context[i];
      cost[s][blk.b] += blk.value * w.marginal[s][blk.a] / game.m;
    }
    const Policy u = oracle.argmin_aggregated(cost);
    z = w.dense;
    for (int i = 0; i < game.m; ++i) {
      const EstimatorBlock& blk = game.blocks[i];
      const int s = game.record_context[i];
      if (u.action(s) == blk.b) {
        z[static_cast<std::size_t>(i) * game.k + blk.a] += eta * blk.value * unit;
      }
    }
    w = approx_project(game, oracle, z, w, n_inner);
  }

  std::vector<MixtureAtom> atoms;
  atoms.reserve(avg.size());
  for (const auto& [actions, weight] : avg) {
    atoms.push_back(MixtureAtom{weight, Policy(actions, game.k)});
  }
  PgdResult result{mixture_normalize(prune_tiny(std::move(atoms))), {}};
  result.report.oracle_calls = oracle.calls() - calls_before;
  result.report.rounds = n_outer;
  result.report.inner_rounds = n_inner;
  result.report.step = eta;
  result.report.guarantee = pgd_epsilon(l_bound, n_outer, n_inner);
  result.report.l_bound = l_bound;
  return result;
}

}  // namespace duel
