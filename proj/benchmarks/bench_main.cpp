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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "duel/batch.hpp"
#include "duel/env.hpp"
#include "duel/rng.hpp"
#include "duel/solvers.hpp"
#include "duel/types.hpp"
#include "duel/winners.hpp"

namespace {

duel::ContextualEnvironment bench_env(const std::string& kind, int k) {
  duel::EnvSpec spec;
  spec.kind = kind;
  spec.k = k;
  return duel::make_environment(spec, 0);
}

duel::BlockGame bench_game(int k, int m) {
  const auto env = bench_env("random_skew", k);
  return duel::estimator_blocks(duel::explore_uniform(env, m, 1));
}

void BM_ApplyB(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const duel::BlockGame game = bench_game(5, m);
  duel::Rng rng(3);
  std::vector<double> u(static_cast<std::size_t>(m) * 5);
  for (double& v : u) v = 2.0 * rng.next_unit() - 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(duel::apply_B(game, u));
  }
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_ApplyB)->Arg(1000)->Arg(10000);

void BM_FactoredOracle(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const duel::BlockGame game = bench_game(5, m);
  const duel::PolicyClass cls = duel::PolicyClass::full_mapping(1, 5);
  duel::FactoredOracle oracle(game, cls);
  duel::Rng rng(4);
  std::vector<double> cost(static_cast<std::size_t>(m) * 5);
  for (double& v : cost) v = 2.0 * rng.next_unit() - 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.argmin(cost));
  }
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_FactoredOracle)->Arg(1000)->Arg(10000);

void BM_SolveVonNeumann(benchmark::State& state) {
  const auto env = bench_env("appendix_b_5arm", 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(duel::solve_von_neumann(env.matrix(0), 1e-6));
  }
}
BENCHMARK(BM_SolveVonNeumann);

void BM_SparringFpl(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const duel::BlockGame game = bench_game(5, 2000);
  const duel::PolicyClass cls = duel::PolicyClass::full_mapping(1, 5);
  const double l_bound = duel::empirical_l(game, cls);
  for (auto _ : state) {
    auto oracle = duel::make_oracle(game, cls);
    benchmark::DoNotOptimize(
        duel::sparring_fpl(game, *oracle, n, l_bound, 0.1, 7));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SparringFpl)->Arg(64)->Arg(256);

void BM_ProjectedGd(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const duel::BlockGame game = bench_game(5, 2000);
  const duel::PolicyClass cls = duel::PolicyClass::full_mapping(1, 5);
  const double l_bound = duel::empirical_l(game, cls);
  for (auto _ : state) {
    auto oracle = duel::make_oracle(game, cls);
    benchmark::DoNotOptimize(duel::projected_gd(game, *oracle, n, n, l_bound));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ProjectedGd)->Arg(32)->Arg(128);

void BM_ApproxProject(benchmark::State& state) {
  const std::int64_t inner = state.range(0);
  const duel::BlockGame game = bench_game(3, 1000);
  const duel::PolicyClass cls = duel::PolicyClass::full_mapping(1, 3);
  const duel::HullPoint start =
      duel::hull_vertex(game, duel::Policy({0}, 3));
  duel::Rng rng(5);
  std::vector<double> z(start.dense.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = start.dense[i] + 0.05 * (2.0 * rng.next_unit() - 1.0);
  }
  for (auto _ : state) {
    auto oracle = duel::make_oracle(game, cls);
    benchmark::DoNotOptimize(
        duel::approx_project(game, *oracle, z, start, inner));
  }
  state.SetItemsProcessed(state.iterations() * inner);
}
BENCHMARK(BM_ApproxProject)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
