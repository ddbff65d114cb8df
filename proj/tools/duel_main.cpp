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

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "duel/batch.hpp"
#include "duel/certify.hpp"
#include "duel/env.hpp"
#include "duel/error.hpp"
#include "duel/exp4.hpp"
#include "duel/io.hpp"
#include "duel/pipeline.hpp"
#include "duel/solvers.hpp"
#include "duel/types.hpp"
#include "duel/winners.hpp"
#include "json.hpp"

namespace {

using duel::format_g17;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNotCertified = 3;
constexpr int kExitNonConvergence = 4;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

// Values are preformatted JSON fragments; csv mode prints a header row and a
// value row.
void print_summary(const std::map<std::string, std::string>& kv,
                   const std::string& format) {
  if (format == "csv") {
    std::string header;
    std::string row;
    bool first = true;
    for (const auto& [key, value] : kv) {
      if (!first) {
        header += ',';
        row += ',';
      }
      first = false;
      header += csv_escape(key);
      row += csv_escape(value);
    }
    std::cout << header << '\n' << row << '\n';
    return;
  }
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : kv) {
    if (!first) out += ',';
    first = false;
    out += '"';
    out += duel::json_escape(key);
    out += "\":";
    out += value;
  }
  out += "}";
  std::cout << out << '\n';
}

std::string join_g17(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_g17(values[i]);
  }
  out += ']';
  return out;
}

std::string join_int(const std::vector<int>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  out += ']';
  return out;
}

// Accepts a bare [[...],...] array, {"matrix":[[...]]}, or an environment
// file (picking the context given by --context).
duel::PreferenceMatrix load_matrix(const std::string& path, int context) {
  const std::string text = duel::read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw duel::ConfigError(std::string("matrix file: ") + e.what());
  }
  try {
    if (j.is_array()) {
      return duel::validate_preference_matrix(
          j.get<std::vector<std::vector<double>>>());
    }
    if (j.contains("matrix")) {
      return duel::validate_preference_matrix(
          j.at("matrix").get<std::vector<std::vector<double>>>());
    }
    if (j.contains("contexts")) {
      const auto& contexts = j.at("contexts");
      if (context < 0 || context >= static_cast<int>(contexts.size())) {
        throw duel::ConfigError("context index out of range for matrix file");
      }
      return duel::validate_preference_matrix(
          contexts.at(context).at("matrix").get<std::vector<std::vector<double>>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw duel::ConfigError(std::string("matrix file: ") + e.what());
  }
  throw duel::ConfigError("matrix file holds no matrix");
}

duel::PolicyClass load_class(const std::string& class_file, int k, int contexts) {
  duel::PolicyClassSpec spec;
  if (class_file.empty()) {
    spec.kind = "full_mapping";
  } else {
    spec = duel::parse_class_spec(duel::read_text_file(class_file));
  }
  return duel::make_policy_class(spec, k, contexts);
}

std::string winner_report_json(const duel::WinnerReport& report,
                               const duel::GameSolution& solution) {
  std::string out = "{\"condorcet\":";
  out += report.condorcet ? std::to_string(*report.condorcet) : "null";
  out += ",\"copeland\":{\"strict\":";
  out += join_int(report.copeland.strict);
  out += ",\"weak\":";
  out += join_int(report.copeland.weak);
  out += ",\"net\":";
  out += join_int(report.copeland.net);
  out += "},\"borda\":";
  out += join_g17(report.borda);
  out += ",\"random_walk\":{\"stationary\":";
  out += join_g17(report.random_walk.stationary.weights());
  out += ",\"winner\":";
  out += std::to_string(report.random_walk.winner);
  out += "},\"von_neumann\":{\"strategy\":";
  out += join_g17(solution.strategy.weights());
  out += ",\"margin\":";
  out += format_g17(solution.certified_margin);
  out += ",\"iterations\":";
  out += std::to_string(solution.solver_iterations);
  out += ",\"support_size\":";
  out += std::to_string(solution.support_size);
  out += "}}\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contextual dueling bandit simulator and winner certification"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "json";
  app.add_option("--seed", seed, "global random seed");
  app.add_option("--out-dir", out_dir, "directory for default artifact paths");
  app.add_option("--format", format, "stdout summary format")
      ->check(CLI::IsMember({"json", "csv"}));

  int rc = kExitOk;

  // make-env
  auto* cmd_make_env = app.add_subcommand("make-env", "generate an environment file");
  cmd_make_env->fallthrough();
  std::string me_kind;
  int me_k = 0;
  std::vector<double> me_utility;
  std::string me_spec_file;
  std::string me_out;
  cmd_make_env->add_option("--kind", me_kind,
                           "cycle, condorcet, clone, appendix_b_5arm, random_skew, utility");
  cmd_make_env->add_option("--k", me_k, "arm count (clone: dominated rest arms)");
  cmd_make_env->add_option("--utility", me_utility, "utility values per arm")
      ->delimiter(',');
  cmd_make_env->add_option("--spec", me_spec_file,
                           "environment spec file (needed for composite)");
  cmd_make_env->add_option("--out", me_out, "output path (default <out-dir>/env.json)");
  cmd_make_env->callback([&] {
    duel::EnvSpec spec;
    if (!me_spec_file.empty()) {
      spec = duel::parse_env_spec(duel::read_text_file(me_spec_file));
    } else {
      if (me_kind.empty()) throw duel::ConfigError("make-env needs --kind or --spec");
      spec.kind = me_kind;
      spec.k = me_k;
      spec.utility = me_utility;
    }
    const duel::ContextualEnvironment env = duel::make_environment(spec, seed);
    const std::string path = me_out.empty() ? out_dir + "/env.json" : me_out;
    duel::write_text_file(path, duel::env_to_json(env));
    print_summary({{"path", "\"" + duel::json_escape(path) + "\""},
                   {"k", std::to_string(env.k())},
                   {"contexts", std::to_string(env.contexts())},
                   {"seed", std::to_string(env.seed())}},
                  format);
  });

  // winners
  auto* cmd_winners = app.add_subcommand("winners", "solution concepts for one matrix");
  cmd_winners->fallthrough();
  std::string wn_matrix;
  double wn_eps = 1e-6;
  int wn_context = 0;
  std::string wn_out;
  cmd_winners->add_option("--matrix", wn_matrix, "matrix or environment file")
      ->required();
  cmd_winners->add_option("--eps", wn_eps, "solver tolerance");
  cmd_winners->add_option("--context", wn_context,
                          "context index when reading an environment file");
  cmd_winners->add_option("--out", wn_out, "also write the report to this path");
  cmd_winners->callback([&] {
    const duel::PreferenceMatrix p = load_matrix(wn_matrix, wn_context);
    const duel::WinnerReport report = duel::winner_report(p);
    const duel::GameSolution solution = duel::solve_von_neumann(p, wn_eps);
    const std::string text = winner_report_json(report, solution);
    if (!wn_out.empty()) duel::write_text_file(wn_out, text);
    if (format == "csv") {
      print_summary(
          {{"condorcet",
            report.condorcet ? std::to_string(*report.condorcet) : "null"},
           {"copeland_strict", join_int(report.copeland.strict)},
           {"copeland_weak", join_int(report.copeland.weak)},
           {"copeland_net", join_int(report.copeland.net)},
           {"borda", join_g17(report.borda)},
           {"random_walk_winner", std::to_string(report.random_walk.winner)},
           {"von_neumann_strategy", join_g17(solution.strategy.weights())},
           {"von_neumann_margin", format_g17(solution.certified_margin)}},
          format);
    } else {
      std::cout << text;
    }
  });

  // explore
  auto* cmd_explore = app.add_subcommand("explore", "uniform exploration log");
  cmd_explore->fallthrough();
  std::string ex_env;
  int ex_m = 0;
  std::string ex_out;
  cmd_explore->add_option("--env", ex_env, "environment file")->required();
  cmd_explore->add_option("--m", ex_m, "exploration rounds")->required();
  cmd_explore->add_option("--out", ex_out, "output path (default <out-dir>/log.jsonl)");
  cmd_explore->callback([&] {
    const duel::ContextualEnvironment env =
        duel::env_from_json(duel::read_text_file(ex_env));
    const duel::ExplorationLog log = duel::explore_uniform(env, ex_m, seed);
    const std::string path = ex_out.empty() ? out_dir + "/log.jsonl" : ex_out;
    duel::write_text_file(path, duel::log_to_jsonl(log));
    print_summary({{"path", "\"" + duel::json_escape(path) + "\""},
                   {"m", std::to_string(log.m)},
                   {"k", std::to_string(log.k)},
                   {"contexts", std::to_string(log.contexts)}},
                  format);
  });

  // shared training options
  struct TrainArgs {
    std::string env;
    std::string log;
    std::string class_file;
    std::string out;
    double eps = 0.25;
    double delta = 0.05;
    std::int64_t rounds = 0;
    std::int64_t inner = 0;
    std::int64_t cap = 10'000;
  };

  auto add_train_options = [](CLI::App* cmd, TrainArgs& args, bool with_delta,
                              bool with_inner) {
    cmd->add_option("--env", args.env, "environment file")->required();
    cmd->add_option("--log", args.log, "exploration log")->required();
    cmd->add_option("--eps", args.eps, "target margin tolerance");
    if (with_delta) cmd->add_option("--delta", args.delta, "confidence level");
    cmd->add_option("--rounds", args.rounds, "override the sized round count");
    if (with_inner) {
      cmd->add_option("--inner", args.inner, "override the inner round count");
    }
    cmd->add_option("--class-file", args.class_file,
                    "policy class spec (default FullMapping)");
    cmd->add_option("--cap", args.cap, "enumeration cap");
    cmd->add_option("--out", args.out,
                    "output path (default <out-dir>/mixture.json)");
  };

  // train-fpl
  auto* cmd_fpl = app.add_subcommand("train-fpl",
                                     "solve an estimated game by sparring perturbed leaders");
  cmd_fpl->fallthrough();
  TrainArgs fpl_args;
  add_train_options(cmd_fpl, fpl_args, true, false);
  cmd_fpl->callback([&] {
    const duel::ContextualEnvironment env =
        duel::env_from_json(duel::read_text_file(fpl_args.env));
    const duel::ExplorationLog log = duel::log_from_jsonl(
        duel::read_text_file(fpl_args.log), env.k(), env.contexts());
    const duel::BlockGame game = duel::estimator_blocks(log);
    const duel::PolicyClass cls =
        load_class(fpl_args.class_file, env.k(), env.contexts());
    const double l_bound = duel::empirical_l(game, cls, fpl_args.cap);
    const std::int64_t n = fpl_args.rounds > 0
                               ? fpl_args.rounds
                               : duel::guarantee_rounds(l_bound, fpl_args.eps);
    auto oracle = duel::make_oracle(game, cls, fpl_args.cap);
    const duel::FplResult result =
        duel::sparring_fpl(game, *oracle, n, l_bound, fpl_args.delta, seed);
    std::map<std::string, std::string> report{
        {"algorithm", "\"fpl\""},
        {"epsilon", format_g17(fpl_args.eps)},
        {"delta", format_g17(fpl_args.delta)},
        {"seed", std::to_string(seed)},
        {"m", std::to_string(game.m)},
        {"rounds", std::to_string(result.report.rounds)},
        {"oracle_calls", std::to_string(result.report.oracle_calls)},
        {"step", format_g17(result.report.step)},
        {"guarantee", format_g17(result.report.guarantee)},
        {"l_bound", format_g17(result.report.l_bound)}};
    const std::string path =
        fpl_args.out.empty() ? out_dir + "/mixture.json" : fpl_args.out;
    duel::write_text_file(path, duel::mixture_to_json(result.row_mixture, report));
    report["path"] = "\"" + duel::json_escape(path) + "\"";
    report["atoms"] = std::to_string(result.row_mixture.size());
    print_summary(report, format);
  });

  // train-pgd
  auto* cmd_pgd = app.add_subcommand("train-pgd",
                                     "solve an estimated game by projected ascent");
  cmd_pgd->fallthrough();
  TrainArgs pgd_args;
  add_train_options(cmd_pgd, pgd_args, false, true);
  cmd_pgd->callback([&] {
    const duel::ContextualEnvironment env =
        duel::env_from_json(duel::read_text_file(pgd_args.env));
    const duel::ExplorationLog log = duel::log_from_jsonl(
        duel::read_text_file(pgd_args.log), env.k(), env.contexts());
    const duel::BlockGame game = duel::estimator_blocks(log);
    const duel::PolicyClass cls =
        load_class(pgd_args.class_file, env.k(), env.contexts());
    const double l_bound = duel::empirical_l(game, cls, pgd_args.cap);
    const std::int64_t n = pgd_args.rounds > 0
                               ? pgd_args.rounds
                               : duel::guarantee_rounds(l_bound, pgd_args.eps);
    const std::int64_t n_inner = pgd_args.inner > 0 ? pgd_args.inner : n;
    auto oracle = duel::make_oracle(game, cls, pgd_args.cap);
    const duel::PgdResult result =
        duel::projected_gd(game, *oracle, n, n_inner, l_bound);
    std::map<std::string, std::string> report{
        {"algorithm", "\"pgd\""},
        {"epsilon", format_g17(pgd_args.eps)},
        {"seed", std::to_string(seed)},
        {"m", std::to_string(game.m)},
        {"rounds", std::to_string(result.report.rounds)},
        {"inner_rounds", std::to_string(result.report.inner_rounds)},
        {"oracle_calls", std::to_string(result.report.oracle_calls)},
        {"step", format_g17(result.report.step)},
        {"guarantee", format_g17(result.report.guarantee)},
        {"l_bound", format_g17(result.report.l_bound)}};
    const std::string path =
        pgd_args.out.empty() ? out_dir + "/mixture.json" : pgd_args.out;
    duel::write_text_file(path, duel::mixture_to_json(result.mixture, report));
    report["path"] = "\"" + duel::json_escape(path) + "\"";
    report["atoms"] = std::to_string(result.mixture.size());
    print_summary(report, format);
  });

  // spar-exp4
  auto* cmd_spar = app.add_subcommand("spar-exp4",
                                      "two bandit learners spar over the horizon");
  cmd_spar->fallthrough();
  std::string sp_env;
  std::int64_t sp_horizon = 0;
  double sp_delta = 0.05;
  std::string sp_class_file;
  std::string sp_out;
  std::string sp_mixture_out;
  std::int64_t sp_cap = 10'000;
  bool sp_analysis = false;
  cmd_spar->add_option("--env", sp_env, "environment file")->required();
  cmd_spar->add_option("--T", sp_horizon, "horizon")->required();
  cmd_spar->add_option("--delta", sp_delta, "confidence level");
  cmd_spar->add_option("--class-file", sp_class_file,
                       "policy class spec (default FullMapping)");
  cmd_spar->add_option("--out", sp_out, "regret CSV path (default <out-dir>/run.csv)");
  cmd_spar->add_option("--mixture-out", sp_mixture_out,
                       "also write the averaged row mixture");
  cmd_spar->add_option("--cap", sp_cap, "enumeration cap for the mixture");
  cmd_spar->add_flag("--analysis", sp_analysis,
                     "materialize full hypothetical duel tables");
  cmd_spar->callback([&] {
    const duel::ContextualEnvironment env =
        duel::env_from_json(duel::read_text_file(sp_env));
    const duel::PolicyClass cls = load_class(sp_class_file, env.k(), env.contexts());
    duel::SparringOptions options;
    options.analysis_mode = sp_analysis;
    const duel::SparringResult result =
        duel::sparring_exp4p(env, cls, sp_horizon, sp_delta, seed, options);
    const std::string path = sp_out.empty() ? out_dir + "/run.csv" : sp_out;
    duel::write_text_file(
        path, duel::regret_to_csv(result.transcript, result.cumulative_regret));
    if (!sp_mixture_out.empty()) {
      const duel::PolicyMixture mixture = duel::online_to_batch(result, cls, sp_cap);
      duel::write_text_file(sp_mixture_out,
                            duel::mixture_to_json(mixture,
                                                  {{"algorithm", "\"spar-exp4\""},
                                                   {"T", std::to_string(sp_horizon)},
                                                   {"delta", format_g17(sp_delta)},
                                                   {"seed", std::to_string(seed)}}));
    }
    print_summary(
        {{"path", "\"" + duel::json_escape(path) + "\""},
         {"T", std::to_string(sp_horizon)},
         {"final_regret", format_g17(result.cumulative_regret.back())}},
        format);
  });

  // certify
  auto* cmd_certify = app.add_subcommand("certify",
                                         "audit a mixture against the exact meta-game");
  cmd_certify->fallthrough();
  std::string ct_env;
  std::string ct_mixture;
  std::string ct_class_file;
  std::string ct_out;
  double ct_eps = 0.25;
  std::int64_t ct_cap = 10'000;
  cmd_certify->add_option("--env", ct_env, "environment file")->required();
  cmd_certify->add_option("--mixture", ct_mixture, "mixture file")->required();
  cmd_certify->add_option("--eps", ct_eps, "margin tolerance");
  cmd_certify->add_option("--class-file", ct_class_file,
                          "policy class spec (default FullMapping)");
  cmd_certify->add_option("--cap", ct_cap, "enumeration cap");
  cmd_certify->add_option("--out", ct_out,
                          "output path (default <out-dir>/certificate.json)");
  cmd_certify->callback([&] {
    const duel::ContextualEnvironment env =
        duel::env_from_json(duel::read_text_file(ct_env));
    const duel::PolicyClass cls = load_class(ct_class_file, env.k(), env.contexts());
    const duel::PolicyMixture mixture =
        duel::mixture_from_json(duel::read_text_file(ct_mixture), env.k());
    const duel::Certificate cert = duel::certify(env, cls, mixture, ct_eps, ct_cap);
    const std::string path =
        ct_out.empty() ? out_dir + "/certificate.json" : ct_out;
    duel::write_text_file(path, duel::certificate_to_json(cert));
    print_summary({{"path", "\"" + duel::json_escape(path) + "\""},
                   {"margin", format_g17(cert.margin)},
                   {"epsilon", format_g17(cert.epsilon)},
                   {"certified", cert.certified ? "true" : "false"},
                   {"class_count", std::to_string(cert.class_count)}},
                  format);
    if (!cert.certified) rc = kExitNotCertified;
  });

  // run
  auto* cmd_run = app.add_subcommand("run", "full pipeline from a config file");
  cmd_run->fallthrough();
  std::string run_config;
  cmd_run->add_option("--config", run_config, "experiment config file")->required();
  cmd_run->callback([&] {
    duel::ExperimentConfig config =
        duel::parse_experiment_config(duel::read_text_file(run_config));
    const duel::PipelineResult result = duel::run_pipeline(config, out_dir);
    std::map<std::string, std::string> summary = result.report;
    summary["out_dir"] = "\"" + duel::json_escape(out_dir) + "\"";
    print_summary(summary, format);
    if (!result.certificate.certified) rc = kExitNotCertified;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const duel::NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return rc;
}
