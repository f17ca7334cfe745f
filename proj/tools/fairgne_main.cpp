#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairgne/config.hpp"
#include "fairgne/harness.hpp"
#include "fairgne/learner.hpp"

namespace {

using namespace fairgne;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;
constexpr int kExitSuiteFailure = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string seeds_text;
  int episodes = -1;
  double eta_lambda = -1.0;
  double lambda_max = -1.0;
  std::string cadence;
  std::optional<bool> clamp;
};

ExperimentConfig resolve_config(const CommonOptions& opt) {
  ExperimentConfig cfg = opt.config_path.empty()
                             ? default_experiment_config()
                             : load_experiment_config(opt.config_path);
  if (!opt.seeds_text.empty()) cfg.seeds = parse_seed_list(opt.seeds_text);
  if (opt.episodes > 0) cfg.train.episodes = opt.episodes;
  if (!opt.cadence.empty()) apply_cadence_preset(cfg.train.dual, opt.cadence);
  if (opt.eta_lambda >= 0.0) cfg.train.dual.eta = opt.eta_lambda;
  if (opt.lambda_max > 0.0) cfg.train.dual.lambda_max = opt.lambda_max;
  if (opt.clamp.has_value()) cfg.train.dual.clamp_slack = *opt.clamp;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  return cfg;
}

nlohmann::json summary_json(const EvalSummary& s) {
  return nlohmann::json{{"success_rate", s.success_rate},
                        {"mean_jfi", s.mean_jfi},
                        {"std_jfi", s.std_jfi},
                        {"mean_lambda", s.mean_lambda},
                        {"constraint_sat_rate", s.constraint_sat_rate},
                        {"kkt_sat_rate", s.kkt_sat_rate},
                        {"mean_return", s.mean_return},
                        {"n_episodes", s.n_episodes}};
}

int cmd_train(const CommonOptions& opt, const std::string& method_text,
              bool save_policy) {
  ExperimentConfig cfg = resolve_config(opt);
  MethodSpec method = parse_method(method_text);
  cfg.methods = {method};
  cfg.validate();

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  HospitalEnv env(cfg.env);
  for (std::uint64_t seed : cfg.seeds) {
    TrainConfig tc = cfg.train;
    tc.penalty = method.mode;
    tc.seed = seed;
    if (method.mode == PenaltyMode::FairGne) {
      tc.dual.tau = method.tau;
    } else {
      tc.lambda_fixed = method.lambda_fixed;
    }
    TrainReport report = train(env, tc);

    std::string tag = std::to_string(seed);
    nlohmann::json j;
    j["method"] = method.label();
    j["seed"] = seed;
    j["final_lambda"] = report.final_lambda;
    j["env_steps"] = report.env_steps;
    nlohmann::json evals = nlohmann::json::array();
    for (const auto& point : report.evals) {
      evals.push_back({{"episode", point.episode},
                       {"summary", summary_json(point.summary)}});
    }
    j["evals"] = std::move(evals);
    std::ofstream f(fs::path(cfg.out_dir) / ("train_report_" + tag + ".json"));
    f << j.dump(1) << '\n';

    std::ofstream lt(fs::path(cfg.out_dir) / ("lambda_trace_" + tag + ".csv"));
    lt << "iteration,lambda,g_estimate,residual,satisfied\n";
    lt.precision(12);
    for (const auto& h : report.lambda_history) {
      KKTRecord rec = kkt_check(h.lambda, h.g_estimate, tc.epsilon_kkt);
      lt << h.iteration << ',' << h.lambda << ',' << h.g_estimate << ','
         << rec.residual << ',' << (rec.satisfied ? 1 : 0) << '\n';
    }

    if (save_policy) {
      fairgne::save_policy(report.policy,
                           (fs::path(cfg.out_dir) / ("policy_" + tag + ".json"))
                               .string());
    }
    if (!report.evals.empty()) {
      const auto& s = report.evals.back().summary;
      std::cout << method.label() << " seed " << seed << ": success "
                << s.success_rate << ", jfi " << s.mean_jfi << ", lambda "
                << s.mean_lambda << ", constraint " << s.constraint_sat_rate
                << ", kkt " << s.kkt_sat_rate << '\n';
    }
  }
  return kExitOk;
}

int cmd_eval(const CommonOptions& opt, const std::string& policy_path,
             int episodes, std::uint64_t seed, const std::string& method_text) {
  ExperimentConfig cfg = resolve_config(opt);
  MethodSpec method = parse_method(method_text);
  QTable policy = load_policy(policy_path);
  HospitalEnv env(cfg.env);

  ShapingContext ctx;
  ctx.mode = method.mode;
  ctx.lambda = method.lambda_fixed;
  ctx.tau = FairnessThreshold(method.mode == PenaltyMode::FairGne
                                  ? method.tau
                                  : cfg.train.dual.tau);
  ctx.clamp_slack = cfg.train.dual.clamp_slack;

  std::vector<EpisodeTrace> traces;
  for (int e = 0; e < episodes; ++e) {
    traces.push_back(greedy_rollout(policy, env, seed + e, ctx));
  }
  EvalSummary summary =
      summarize(traces, ctx.tau, cfg.train.epsilon_kkt, cfg.train.gamma);

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  write_episodes_csv((fs::path(cfg.out_dir) / "episodes_eval.csv").string(),
                     traces, cfg.env.n);
  std::ofstream f(fs::path(cfg.out_dir) / "eval_summary.json");
  f << summary_json(summary).dump(1) << '\n';
  std::cout << summary_json(summary).dump(1) << '\n';
  return kExitOk;
}

int cmd_oracle(const std::string& suite_path) {
  OracleSuiteReport report = suite_path.empty()
                                 ? run_oracle_suite()
                                 : run_oracle_suite_file(suite_path);
  print_oracle_report(std::cout, report);
  return report.all_passed() ? kExitOk : kExitSuiteFailure;
}

int cmd_table(const CommonOptions& opt) {
  ExperimentConfig cfg = resolve_config(opt);
  cfg.validate();
  RunArtifact artifact = run_experiment(cfg);
  write_artifact(artifact, cfg.out_dir);
  std::cout << render_table_markdown(artifact);
  for (const auto& cell : artifact.cells) {
    if (cell.failed) {
      std::cerr << "cell " << cell.method.label() << " seed " << cell.seed
                << " failed: " << cell.error << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fairness-constrained multi-agent benchmark harness"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string method_text = "fair-gne:0.85";
  std::string baseline_text;
  double tau_flag = -1.0;
  bool save_policy = false;
  std::string policy_path;
  int eval_episodes = 50;
  std::uint64_t eval_seed = 0;
  std::string suite_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "experiment config file");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--seeds", opt.seeds_text, "comma-separated seed list");
    cmd->add_option("--episodes", opt.episodes, "training episodes per cell");
    cmd->add_option("--eta-lambda", opt.eta_lambda, "dual step size");
    cmd->add_option("--lambda-max", opt.lambda_max, "multiplier cap");
    cmd->add_option("--cadence", opt.cadence,
                    "dual update cadence: main-text, appendix, episodic");
    cmd->add_flag_callback(
        "--clamp", [&] { opt.clamp = true; },
        "clamp the shaped penalty at 0 (no slack bonus)");
  };

  CLI::App* train_cmd = app.add_subcommand("train", "train one method");
  add_common(train_cmd);
  train_cmd->add_option("--tau", tau_flag, "fairness threshold (fair-gne)");
  train_cmd->add_option("--baseline", baseline_text,
                        "baseline method: none or gini:<lambda>");
  train_cmd->add_flag("--save-policy", save_policy, "write policy_<seed>.json");

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a saved policy");
  add_common(eval_cmd);
  eval_cmd->add_option("--policy", policy_path, "policy JSON file")->required();
  eval_cmd->add_option("--eval-episodes", eval_episodes, "greedy episodes");
  eval_cmd->add_option("--seed", eval_seed, "first evaluation seed");
  eval_cmd->add_option("--method", method_text,
                       "method label for trace columns");

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "run the finite-game oracle suite");
  oracle_cmd->add_option("--suite", suite_path, "declarative suite JSON");

  CLI::App* table_cmd =
      app.add_subcommand("table", "full method-grid comparison run");
  add_common(table_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (train_cmd->parsed()) {
      if (!baseline_text.empty() && tau_flag > 0.0) {
        std::cerr << "choose either --baseline or --tau\n";
        return kExitConfigError;
      }
      std::string method = !baseline_text.empty()
                               ? baseline_text
                               : (tau_flag > 0.0
                                      ? "fair-gne:" + std::to_string(tau_flag)
                                      : method_text);
      return cmd_train(opt, method, save_policy);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(opt, policy_path, eval_episodes, eval_seed, method_text);
    }
    if (oracle_cmd->parsed()) return cmd_oracle(suite_path);
    if (table_cmd->parsed()) return cmd_table(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitOk;
}
