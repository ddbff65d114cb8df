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

#include "duel/winners.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

namespace duel {

namespace {

constexpr double kPruneThreshold = 1e-9;

double margin_of(const PreferenceMatrix& p, const std::vector<double>& w) {
  const int k = p.k();
  double worst = std::numeric_limits<double>::infinity();
  for (int b = 0; b < k; ++b) {
    double column = 0.0;
    for (int a = 0; a < k; ++a) column += w[a] * p.entry(a, b);
    worst = std::min(worst, column);
  }
  return worst;
}

std::vector<double> pruned(const std::vector<double>& w) {
  std::vector<double> out(w.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] >= kPruneThreshold) {
      out[i] = w[i];
      sum += w[i];
    }
  }
  for (double& v : out) v /= sum;
  return out;
}

int support_size_of(const std::vector<double>& w) {
  int n = 0;
  for (double v : w) n += v > 0.0 ? 1 : 0;
  return n;
}

// Solves the equalizing system on a candidate support S by minimum-norm
// least squares: sum_{a in S} x_a P(a, b) = 0 for every b in S, sum x = 1.
// Returns the full-length strategy when the solution is consistent,
// nonnegative, and certifies a margin >= accept_margin on all of P.
std::optional<std::vector<double>> polish_support(
    const PreferenceMatrix& p, const std::vector<int>& support,
    double accept_margin) {
  const int n = static_cast<int>(support.size());
  Eigen::MatrixXd a(n + 1, n);
  Eigen::VectorXd rhs(n + 1);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      a(row, col) = p.entry(support[col], support[row]);
    }
    rhs(row) = 0.0;
  }
  for (int col = 0; col < n; ++col) a(n, col) = 1.0;
  rhs(n) = 1.0;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  Eigen::VectorXd x = cod.solve(rhs);
  if ((a * x - rhs).lpNorm<Eigen::Infinity>() > 1e-9) return std::nullopt;
  for (int i = 0; i < n; ++i) {
    if (x(i) < -1e-11) return std::nullopt;
  }

  std::vector<double> w(p.k(), 0.0);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::max(x(i), 0.0);
    w[support[i]] = v;
    sum += v;
  }
  if (!(sum > 0.0)) return std::nullopt;
  for (double& v : w) v /= sum;
  if (margin_of(p, w) < accept_margin) return std::nullopt;
  return w;
}

std::vector<int> support_above(const std::vector<double>& w, double threshold) {
  std::vector<int> s;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    if (w[i] > threshold) s.push_back(i);
  }
  return s;
}

}  // namespace

GameSolution solve_von_neumann(const PreferenceMatrix& p, double eps_solve,
                               std::int64_t max_iterations) {
  if (!(eps_solve > 0.0)) throw BadParams("eps_solve must be positive");
  const int k = p.k();
  if (k == 1) return {SimplexDistribution({1.0}), 0.0, 0, 1};

  const double log_k = std::log(static_cast<double>(k));
  const double formula_target = 8.0 * log_k / (eps_solve * eps_solve);
  const std::int64_t budget =
      formula_target >= static_cast<double>(max_iterations)
          ? max_iterations
          : std::max<std::int64_t>(1, static_cast<std::int64_t>(std::lround(
                                          std::ceil(formula_target))));
  const double accept_margin = -std::min(eps_solve, 1e-9);

  std::vector<double> log_w(k), x(k), gains(k), avg(k);
  std::int64_t total_iterations = 0;
  std::int64_t epoch_length = 1024;

  const auto finish = [&](const std::vector<double>& w,
                          std::int64_t iterations) -> std::optional<GameSolution> {
    const std::vector<double> out = pruned(w);
    const double margin = margin_of(p, out);
    if (margin < -eps_solve) return std::nullopt;
    return GameSolution{SimplexDistribution(out), margin, iterations,
                        support_size_of(out)};
  };

  while (total_iterations < budget) {
    const std::int64_t t_epoch =
        std::min<std::int64_t>(epoch_length, budget - total_iterations);
    const double eta = std::sqrt(log_k / static_cast<double>(t_epoch));

    std::fill(log_w.begin(), log_w.end(), 0.0);
    std::fill(x.begin(), x.end(), 1.0 / k);
    std::fill(avg.begin(), avg.end(), 0.0);

    for (std::int64_t t = 0; t < t_epoch; ++t) {
      for (int a = 0; a < k; ++a) {
        double g = 0.0;
        for (int b = 0; b < k; ++b) g += p.entry(a, b) * x[b];
        gains[a] = g;
      }
      double max_lw = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < k; ++a) {
        log_w[a] += eta * gains[a];
        max_lw = std::max(max_lw, log_w[a]);
      }
      double z = 0.0;
      for (int a = 0; a < k; ++a) {
        x[a] = std::exp(log_w[a] - max_lw);
        z += x[a];
      }
      for (int a = 0; a < k; ++a) {
        x[a] /= z;
        avg[a] += x[a];
      }
    }
    total_iterations += t_epoch;
    for (double& v : avg) v /= static_cast<double>(t_epoch);

    std::set<std::vector<int>> candidates;
    for (double threshold : {1e-2, 1e-3, 1e-5, 1e-8}) {
      candidates.insert(support_above(x, threshold));
    }
    for (double threshold : {1e-2, 1e-3}) {
      candidates.insert(support_above(avg, threshold));
    }
    std::vector<int> full(k);
    for (int i = 0; i < k; ++i) full[i] = i;
    candidates.insert(std::move(full));

    std::vector<std::vector<int>> ordered(candidates.begin(), candidates.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                return a.size() < b.size();
              });
    for (const std::vector<int>& support : ordered) {
      if (support.empty()) continue;
      if (auto w = polish_support(p, support, accept_margin)) {
        if (auto solution = finish(*w, total_iterations)) return *solution;
      }
    }
    if (auto solution = finish(avg, total_iterations)) return *solution;

    epoch_length *= 2;
  }
  throw NonConvergence("von Neumann solver tolerance unreachable",
                       total_iterations);
}

std::optional<int> find_condorcet(const PreferenceMatrix& p) {
  for (int a = 0; a < p.k(); ++a) {
    bool beats_all = true;
    for (int b = 0; b < p.k(); ++b) {
      if (b != a && !(p.entry(a, b) > 0.0)) {
        beats_all = false;
        break;
      }
    }
    if (beats_all) return a;
  }
  return std::nullopt;
}

CopelandScores copeland_scores(const PreferenceMatrix& p) {
  const int k = p.k();
  CopelandScores scores{std::vector<int>(k, 0), std::vector<int>(k, 0),
                        std::vector<int>(k, 0)};
  for (int i = 0; i < k; ++i) {
    int wins = 0, non_losses = 0, losses = 0;
    for (int j = 0; j < k; ++j) {
      const double v = p.entry(i, j);
      if (v > 0.0) ++wins;
      if (v >= 0.0) ++non_losses;
      if (v < 0.0) ++losses;
    }
    scores.strict[i] = wins;
    scores.weak[i] = non_losses;
    scores.net[i] = wins - losses;
  }
  return scores;
}

std::vector<double> borda_scores(const PreferenceMatrix& p) {
  const int k = p.k();
  std::vector<double> scores(k, 0.0);
  for (int i = 0; i < k; ++i) {
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += (p.entry(i, j) + 1.0) / 2.0;
    scores[i] = sum / k;
  }
  return scores;
}

RandomWalkResult random_walk_winner(const PreferenceMatrix& p) {
  const int k = p.k();
  std::vector<double> column_sum(k, 0.0);
  for (int b = 0; b < k; ++b) {
    for (int a = 0; a < k; ++a) column_sum[b] += p.entry(a, b) / 2.0 + 0.5;
  }
  std::vector<double> x(k, 1.0 / k), next(k);
  constexpr std::int64_t kMaxIterations = 1'000'000;
  for (std::int64_t t = 0; t < kMaxIterations; ++t) {
    for (int a = 0; a < k; ++a) {
      double v = 0.0;
      for (int b = 0; b < k; ++b) {
        v += (p.entry(a, b) / 2.0 + 0.5) / column_sum[b] * x[b];
      }
      next[a] = v;
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    double diff = 0.0;
    for (int a = 0; a < k; ++a) {
      next[a] /= sum;
      diff = std::max(diff, std::abs(next[a] - x[a]));
    }
    x.swap(next);
    if (diff <= 1e-10) {
      const int winner = static_cast<int>(
          std::max_element(x.begin(), x.end()) - x.begin());
      return {SimplexDistribution(x), winner};
    }
  }
  throw NonConvergence("random-walk power iteration", kMaxIterations);
}

WinnerReport winner_report(const PreferenceMatrix& p) {
  return {find_condorcet(p), copeland_scores(p), borda_scores(p),
          random_walk_winner(p)};
}

}  // namespace duel
