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

#include "duel/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <utility>

#include "duel/batch.hpp"
#include "duel/error.hpp"
#include "duel/exp4.hpp"
#include "duel/io.hpp"
#include "duel/solvers.hpp"
#include "json.hpp"

namespace duel {
namespace {

using nlohmann::json;

EnvSpec env_spec_from_json(const json& j) {
  EnvSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (j.contains("k")) spec.k = j.at("k").get<int>();
  if (j.contains("utility")) {
    spec.utility = j.at("utility").get<std::vector<double>>();
  }
  if (j.contains("q")) spec.q = j.at("q").get<std::vector<double>>();
  if (j.contains("components")) {
    for (const json& c : j.at("components")) {
      spec.components.push_back(env_spec_from_json(c));
    }
  }
  return spec;
}

PolicyClassSpec class_spec_from_json(const json& j) {
  PolicyClassSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (j.contains("policies")) {
    spec.policies = j.at("policies").get<std::vector<std::vector<int>>>();
  }
  return spec;
}

int sample_index(const std::vector<double>& p, Rng& rng) {
  const double u = rng.next_unit();
  double cumulative = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    cumulative += p[a];
    if (u < cumulative) return static_cast<int>(a);
  }
  for (std::size_t a = p.size(); a-- > 0;) {
    if (p[a] > 0.0) return static_cast<int>(a);
  }
  throw InvalidDistribution("sampling distribution sums to zero");
}

std::vector<std::vector<double>> mixture_marginals(const PolicyMixture& mixture,
                                                   int contexts, int k) {
  std::vector<std::vector<double>> marg(contexts, std::vector<double>(k, 0.0));
  for (const MixtureAtom& atom : mixture.atoms()) {
    for (int s = 0; s < contexts; ++s) {
      marg[s][atom.policy.action(s)] += atom.weight;
    }
  }
  return marg;
}

std::string quoted(const std::string& s) { return "\"" + json_escape(s) + "\""; }

}  // namespace

PolicyClass make_policy_class(const PolicyClassSpec& spec, int k, int contexts) {
  if (spec.kind == "full_mapping") {
    return PolicyClass::full_mapping(contexts, k);
  }
  if (spec.kind == "tabular") {
    if (spec.policies.empty()) {
      throw ConfigError("tabular class lists no policies");
    }
    std::vector<Policy> policies;
    policies.reserve(spec.policies.size());
    for (const auto& actions : spec.policies) {
      if (static_cast<int>(actions.size()) != contexts) {
        throw ConfigError("tabular policy length and context count differ");
      }
      policies.push_back(Policy(actions, k));
    }
    return PolicyClass::tabular(k, std::move(policies));
  }
  throw ConfigError("unknown policy class kind: " + spec.kind);
}

EnvSpec parse_env_spec(const std::string& text) {
  try {
    return env_spec_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("environment spec: ") + e.what());
  }
}

PolicyClassSpec parse_class_spec(const std::string& text) {
  try {
    return class_spec_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("class spec: ") + e.what());
  }
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  try {
    ExperimentConfig config;
    if (j.contains("env") && j.contains("env_file")) {
      throw ConfigError("config sets both env and env_file");
    }
    if (j.contains("env")) {
      config.has_env_spec = true;
      config.env = env_spec_from_json(j.at("env"));
    } else if (j.contains("env_file")) {
      config.env_file = j.at("env_file").get<std::string>();
    } else {
      throw ConfigError("config needs env or env_file");
    }
    config.class_spec = class_spec_from_json(j.at("class"));
    config.algorithm = j.at("algorithm").get<std::string>();
    if (j.contains("mode")) config.mode = j.at("mode").get<std::string>();
    if (j.contains("T")) config.horizon = j.at("T").get<std::int64_t>();
    if (j.contains("m")) config.m = j.at("m").get<int>();
    config.epsilon = j.at("epsilon").get<double>();
    config.delta = j.at("delta").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("cap")) config.cap = j.at("cap").get<std::int64_t>();

    if (config.algorithm != "spar-exp4" && config.algorithm != "fpl" &&
        config.algorithm != "pgd") {
      throw ConfigError("unknown algorithm: " + config.algorithm);
    }
    if (config.mode != "full-explore-exploit" &&
        config.mode != "explore-then-exploit") {
      throw ConfigError("unknown mode: " + config.mode);
    }
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
      throw ConfigError("epsilon must lie in (0, 1)");
    }
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
      throw ConfigError("delta must lie in (0, 1)");
    }
    if (config.cap < 1) throw ConfigError("cap must be positive");
    if (config.horizon < 0 || config.m < 0) {
      throw ConfigError("horizons must be positive");
    }
    return config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

int exploration_budget(const ExperimentConfig& config, double log_class_size,
                       int k) {
  if (config.mode == "explore-then-exploit") {
    if (config.m < 1) throw ConfigError("explore-then-exploit needs m >= 1");
    return config.m;
  }
  if (config.horizon < 1) throw ConfigError("full-explore-exploit needs T >= 1");
  const double psi = log_class_size - std::log(config.delta);
  const double t = static_cast<double>(config.horizon);
  const double raw = std::ceil(std::cbrt(static_cast<double>(k) * k) *
                               std::cbrt(t * t) * std::cbrt(psi));
  if (raw > 100'000'000.0) throw ConfigError("exploration budget overflows");
  return static_cast<int>(raw);
}

PipelineResult run_pipeline(const ExperimentConfig& config,
                            const std::string& out_dir) {
  const ContextualEnvironment env =
      config.has_env_spec
          ? make_environment(config.env, config.seed)
          : env_from_json(read_text_file(config.env_file));
  const PolicyClass policy_class =
      make_policy_class(config.class_spec, env.k(), env.contexts());
  const int k = env.k();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create " + out_dir + ": " + ec.message());

  PipelineResult result;
  result.env_path = out_dir + "/env.json";
  result.log_path = out_dir + "/log.jsonl";
  result.mixture_path = out_dir + "/mixture.json";
  result.certificate_path = out_dir + "/certificate.json";
  result.regret_path = out_dir + "/regret.csv";

  std::map<std::string, std::string>& report = result.report;
  report["algorithm"] = quoted(config.algorithm);
  report["epsilon"] = format_g17(config.epsilon);
  report["delta"] = format_g17(config.delta);
  report["seed"] = std::to_string(config.seed);

  ExplorationLog log;
  PolicyMixture mixture({MixtureAtom{1.0, Policy(std::vector<int>(env.contexts(), 0), k)}});
  std::vector<DuelRecord> transcript;
  std::vector<double> curve;

  if (config.algorithm == "spar-exp4") {
    if (config.horizon < 1) throw ConfigError("spar-exp4 needs T >= 1");
    const SparringResult spar = sparring_exp4p(env, policy_class, config.horizon,
                                               config.delta, config.seed);
    mixture = online_to_batch(spar, policy_class, config.cap);
    transcript = spar.transcript;
    curve = spar.cumulative_regret;
    log.m = static_cast<int>(transcript.size());
    log.k = k;
    log.contexts = env.contexts();
    log.l_bound = static_cast<double>(k) * k;
    log.v_bound = log.l_bound;
    log.records = transcript;
    const double kt = static_cast<double>(k) * static_cast<double>(config.horizon);
    report["T"] = std::to_string(config.horizon);
    report["p_min"] = format_g17(std::sqrt(policy_class.log_size() / kt));
  } else {
    const int m = exploration_budget(config, policy_class.log_size(), k);
    const std::int64_t horizon = config.horizon > 0 ? config.horizon : m;
    if (horizon < m) throw ConfigError("horizon T is below the exploration budget");
    log = explore_uniform(env, m, config.seed);
    const BlockGame game = estimator_blocks(log);
    const double l_bound = empirical_l(game, policy_class, config.cap);
    const std::int64_t n = guarantee_rounds(l_bound, config.epsilon);
    auto oracle = make_oracle(game, policy_class, config.cap);
    SolverReport solver_report;
    if (config.algorithm == "fpl") {
      FplResult fpl = sparring_fpl(game, *oracle, n, l_bound, config.delta,
                                   config.seed);
      mixture = std::move(fpl.row_mixture);
      solver_report = fpl.report;
    } else {
      PgdResult pgd = projected_gd(game, *oracle, n, n, l_bound);
      mixture = std::move(pgd.mixture);
      solver_report = pgd.report;
    }
    transcript = log.records;
    Rng exploit_rng = Rng::stream(config.seed, streams::kExploit);
    const std::vector<std::vector<double>> marg =
        mixture_marginals(mixture, env.contexts(), k);
    for (std::int64_t t = m; t < horizon; ++t) {
      const int s = sample_round(env, exploit_rng);
      const int a = sample_index(marg[s], exploit_rng);
      const int b = sample_index(marg[s], exploit_rng);
      const int r = duel(env, s, a, b, exploit_rng);
      transcript.push_back(DuelRecord{t, s, a, b, r});
    }
    curve = regret_curve(env, transcript, policy_class);
    report["T"] = std::to_string(horizon);
    report["m"] = std::to_string(m);
    report["l_bound"] = format_g17(solver_report.l_bound);
    report["rounds"] = std::to_string(solver_report.rounds);
    if (solver_report.inner_rounds > 0) {
      report["inner_rounds"] = std::to_string(solver_report.inner_rounds);
    }
    report["oracle_calls"] = std::to_string(solver_report.oracle_calls);
    report["step"] = format_g17(solver_report.step);
    report["guarantee"] = format_g17(solver_report.guarantee);
  }

  result.certificate =
      certify(env, policy_class, mixture, config.epsilon, config.cap);
  report["margin"] = format_g17(result.certificate.margin);
  report["certified"] = result.certificate.certified ? "true" : "false";

  write_text_file(result.env_path, env_to_json(env));
  write_text_file(result.log_path, log_to_jsonl(log));
  write_text_file(result.mixture_path, mixture_to_json(mixture, report));
  write_text_file(result.certificate_path,
                  certificate_to_json(result.certificate));
  write_text_file(result.regret_path, regret_to_csv(transcript, curve));
  return result;
}

}  // namespace duel
