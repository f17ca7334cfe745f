#include "fairgne/harness.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace fairgne {

namespace {

using nlohmann::json;

std::string sanitize_label(std::string label) {
  for (char& c : label) {
    if (c == ':') c = '-';
  }
  return label;
}

std::string format_pm(double mean, double std, int precision = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << mean << " +- " << std;
  return os.str();
}

TrainConfig cell_train_config(const ExperimentConfig& cfg,
                              const MethodSpec& method, std::uint64_t seed) {
  TrainConfig tc = cfg.train;
  tc.penalty = method.mode;
  tc.seed = seed;
  switch (method.mode) {
    case PenaltyMode::None:
      break;
    case PenaltyMode::FixedGini:
    case PenaltyMode::FixedJfi:
      tc.lambda_fixed = method.lambda_fixed;
      break;
    case PenaltyMode::FairGne:
      tc.dual.tau = method.tau;
      break;
  }
  return tc;
}

CellResult run_cell(const ExperimentConfig& cfg, const MethodSpec& method,
                    std::uint64_t seed) {
  CellResult cell;
  cell.method = method;
  cell.seed = seed;
  try {
    HospitalEnv env(cfg.env);
    TrainConfig tc = cell_train_config(cfg, method, seed);
    TrainReport report = train(env, tc);
    cell.eval_curve = report.evals;
    cell.lambda_history = std::move(report.lambda_history);
    cell.final_lambda = report.final_lambda;
    cell.env_steps = report.env_steps;

    ShapingContext ctx;
    ctx.mode = method.mode;
    ctx.lambda = report.final_lambda;
    ctx.tau = FairnessThreshold(method.mode == PenaltyMode::FairGne
                                    ? method.tau
                                    : tc.dual.tau);
    ctx.clamp_slack = tc.dual.clamp_slack;
    cell.eval_traces.reserve(cfg.eval_episodes);
    for (int e = 0; e < cfg.eval_episodes; ++e) {
      cell.eval_traces.push_back(
          greedy_rollout(report.policy, env, e, ctx));
    }
    cell.final_summary = summarize(cell.eval_traces, ctx.tau, tc.epsilon_kkt,
                                   tc.gamma);
    cell.final_summary.n_seeds = 1;
  } catch (const std::exception& ex) {
    cell.failed = true;
    cell.error = ex.what();
  }
  return cell;
}

json summary_to_json(const EvalSummary& s) {
  return json{{"success_rate", s.success_rate},
              {"mean_jfi", s.mean_jfi},
              {"std_jfi", s.std_jfi},
              {"mean_step_jfi", s.mean_step_jfi},
              {"mean_lambda", s.mean_lambda},
              {"std_lambda", s.std_lambda},
              {"constraint_sat_rate", s.constraint_sat_rate},
              {"kkt_sat_rate", s.kkt_sat_rate},
              {"mean_return", s.mean_return},
              {"n_episodes", s.n_episodes},
              {"n_seeds", s.n_seeds}};
}

json env_config_to_json(const EnvConfig& env) {
  json j{{"n", env.n},
         {"c_required", env.c_required},
         {"b_required", env.b_required},
         {"horizon", env.horizon},
         {"energy_max", env.energy_max},
         {"energy_enabled", env.energy_enabled},
         {"skill_preset", env.skill_preset == SkillPreset::Uniform
                              ? "uniform"
                              : "heterogeneous"}};
  json starts = json::array();
  for (int i = 0; i < env.n; ++i) {
    starts.push_back(std::string(station_name(env.start_station(i))));
  }
  j["start_stations"] = std::move(starts);
  return j;
}

json train_config_to_json(const TrainConfig& tc) {
  return json{{"episodes", tc.episodes},
              {"gamma", tc.gamma},
              {"alpha", tc.alpha},
              {"epsilon_start", tc.epsilon.start},
              {"epsilon_end", tc.epsilon.end},
              {"epsilon_decay_fraction", tc.epsilon.decay_fraction},
              {"backbone", tc.backbone == BackboneMode::CentralizedJoint
                               ? "centralized"
                               : "independent"},
              {"eval_every", tc.eval_every},
              {"eval_episodes", tc.eval_episodes},
              {"epsilon_kkt", tc.epsilon_kkt},
              {"dual",
               {{"lambda0", tc.dual.lambda0},
                {"lambda_max", tc.dual.lambda_max},
                {"eta_lambda", tc.dual.eta},
                {"cadence", cadence_preset_name(tc.dual)},
                {"update_period", tc.dual.update_period},
                {"mc_rollouts", tc.dual.mc_rollouts},
                {"clamp_slack", tc.dual.clamp_slack},
                {"history_stride", tc.dual.history_stride}}}};
}

json config_to_json(const ExperimentConfig& cfg) {
  json methods = json::array();
  for (const auto& m : cfg.methods) methods.push_back(m.label());
  return json{{"env", env_config_to_json(cfg.env)},
              {"train", train_config_to_json(cfg.train)},
              {"methods", std::move(methods)},
              {"seeds", cfg.seeds},
              {"eval_episodes", cfg.eval_episodes},
              {"alpha", cfg.alpha},
              {"workers", cfg.workers}};
}

}  // namespace

RunArtifact run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunArtifact artifact;
  artifact.config = config;

  struct CellSpec {
    MethodSpec method;
    std::uint64_t seed;
  };
  std::vector<CellSpec> specs;
  for (const auto& method : config.methods) {
    for (std::uint64_t seed : config.seeds) specs.push_back({method, seed});
  }
  artifact.cells.resize(specs.size());

  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, specs.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      artifact.cells[i] = run_cell(config, specs[i].method, specs[i].seed);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Deterministic aggregation pass in method order.
  std::size_t idx = 0;
  for (const auto& method : config.methods) {
    MethodAggregate agg;
    agg.method = method;
    std::vector<double> success, jfi, lambda, csat, ksat;
    for (std::size_t s = 0; s < config.seeds.size(); ++s, ++idx) {
      const CellResult& cell = artifact.cells[idx];
      if (cell.failed) continue;
      success.push_back(cell.final_summary.success_rate);
      jfi.push_back(cell.final_summary.mean_jfi);
      lambda.push_back(cell.final_summary.mean_lambda);
      csat.push_back(cell.final_summary.constraint_sat_rate);
      ksat.push_back(cell.final_summary.kkt_sat_rate);
    }
    agg.success = sample_stats(success);
    agg.jfi = sample_stats(jfi);
    agg.lambda = sample_stats(lambda);
    agg.constraint_sat = sample_stats(csat);
    agg.kkt_sat = sample_stats(ksat);
    agg.per_seed_jfi = jfi;
    agg.per_seed_success = success;
    artifact.aggregates.push_back(std::move(agg));
  }

  // Welch + Bonferroni: each adaptive row against every fixed-penalty row.
  std::vector<const MethodAggregate*> baselines;
  for (const auto& agg : artifact.aggregates) {
    if (agg.method.mode != PenaltyMode::FairGne) baselines.push_back(&agg);
  }
  int m = static_cast<int>(baselines.size());
  for (const auto& agg : artifact.aggregates) {
    if (agg.method.mode != PenaltyMode::FairGne || m == 0) continue;
    if (agg.per_seed_jfi.size() < 2) continue;
    for (const auto* base : baselines) {
      if (base->per_seed_jfi.size() < 2) continue;
      Comparison cmp;
      cmp.method = agg.method.label();
      cmp.baseline = base->method.label();
      cmp.metric = "jfi";
      cmp.test = welch_ttest(agg.per_seed_jfi, base->per_seed_jfi);
      cmp.test.alpha_adjusted = config.alpha / m;
      cmp.test.significant_bonferroni = cmp.test.p_value <= cmp.test.alpha_adjusted;
      artifact.comparisons.push_back(std::move(cmp));
    }
  }
  return artifact;
}

std::string render_table_markdown(const RunArtifact& artifact) {
  std::ostringstream os;
  os << "| Method | Success | lambda | Workload JFI | Constraint Sat. | KKT Sat. |\n";
  os << "|---|---|---|---|---|---|\n";
  for (const auto& agg : artifact.aggregates) {
    bool adaptive = agg.method.mode == PenaltyMode::FairGne;
    os << "| " << agg.method.label() << " | "
       << format_pm(agg.success.mean, agg.success.stddev()) << " | ";
    if (adaptive) {
      os << format_pm(agg.lambda.mean, agg.lambda.stddev(), 1);
    } else {
      std::ostringstream lam;
      lam << agg.method.lambda_fixed << " (fixed)";
      os << lam.str();
    }
    bool significant = false;
    for (const auto& cmp : artifact.comparisons) {
      if (cmp.method == agg.method.label() &&
          cmp.test.significant_bonferroni) {
        significant = true;
        break;
      }
    }
    os << " | " << format_pm(agg.jfi.mean, agg.jfi.stddev())
       << (significant ? " *" : "") << " | ";
    if (adaptive) {
      os << format_pm(agg.constraint_sat.mean, agg.constraint_sat.stddev())
         << " | " << format_pm(agg.kkt_sat.mean, agg.kkt_sat.stddev());
    } else {
      os << "-- | --";
    }
    os << " |\n";
  }
  return os.str();
}

std::string render_table_csv(const RunArtifact& artifact) {
  std::ostringstream os;
  os << "method,success_mean,success_std,lambda_mean,lambda_std,jfi_mean,"
        "jfi_std,constraint_sat_mean,constraint_sat_std,kkt_sat_mean,"
        "kkt_sat_std,n_seeds\n";
  os.precision(10);
  for (const auto& agg : artifact.aggregates) {
    os << agg.method.label() << ',' << agg.success.mean << ','
       << agg.success.stddev() << ',' << agg.lambda.mean << ','
       << agg.lambda.stddev() << ',' << agg.jfi.mean << ','
       << agg.jfi.stddev() << ',' << agg.constraint_sat.mean << ','
       << agg.constraint_sat.stddev() << ',' << agg.kkt_sat.mean << ','
       << agg.kkt_sat.stddev() << ',' << agg.success.n << '\n';
  }
  return os.str();
}

void write_artifact(const RunArtifact& artifact, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir);

  json root;
  root["config"] = config_to_json(artifact.config);
  json cells = json::array();
  for (const auto& cell : artifact.cells) {
    json c;
    c["method"] = cell.method.label();
    c["seed"] = cell.seed;
    c["failed"] = cell.failed;
    if (cell.failed) {
      c["error"] = cell.error;
    } else {
      c["final_summary"] = summary_to_json(cell.final_summary);
      c["final_lambda"] = cell.final_lambda;
      c["env_steps"] = cell.env_steps;
      json curve = json::array();
      for (const auto& point : cell.eval_curve) {
        curve.push_back({{"episode", point.episode},
                         {"summary", summary_to_json(point.summary)}});
      }
      c["eval_curve"] = std::move(curve);
    }
    cells.push_back(std::move(c));
  }
  root["cells"] = std::move(cells);

  json aggs = json::array();
  for (const auto& agg : artifact.aggregates) {
    aggs.push_back({{"method", agg.method.label()},
                    {"success_mean", agg.success.mean},
                    {"success_std", agg.success.stddev()},
                    {"jfi_mean", agg.jfi.mean},
                    {"jfi_std", agg.jfi.stddev()},
                    {"lambda_mean", agg.lambda.mean},
                    {"lambda_std", agg.lambda.stddev()},
                    {"constraint_sat_mean", agg.constraint_sat.mean},
                    {"kkt_sat_mean", agg.kkt_sat.mean},
                    {"per_seed_jfi", agg.per_seed_jfi},
                    {"per_seed_success", agg.per_seed_success}});
  }
  root["aggregates"] = std::move(aggs);

  json comps = json::array();
  for (const auto& cmp : artifact.comparisons) {
    comps.push_back({{"method", cmp.method},
                     {"baseline", cmp.baseline},
                     {"metric", cmp.metric},
                     {"t", cmp.test.t_statistic},
                     {"df", cmp.test.degrees_freedom},
                     {"p", cmp.test.p_value},
                     {"cohens_d", cmp.test.cohens_d},
                     {"alpha_adjusted", cmp.test.alpha_adjusted},
                     {"significant", cmp.test.significant_bonferroni}});
  }
  root["comparisons"] = std::move(comps);

  {
    std::ofstream f(fs::path(out_dir) / "results.json");
    if (!f) throw std::runtime_error("cannot write results.json");
    f << root.dump(1) << '\n';
  }
  {
    std::ofstream f(fs::path(out_dir) / "table.md");
    f << render_table_markdown(artifact);
  }
  {
    std::ofstream f(fs::path(out_dir) / "table.csv");
    f << render_table_csv(artifact);
  }

  for (const auto& cell : artifact.cells) {
    if (cell.failed) continue;
    std::string tag =
        sanitize_label(cell.method.label()) + "_" + std::to_string(cell.seed);
    {
      std::ofstream f(fs::path(out_dir) / ("lambda_trace_" + tag + ".csv"));
      f << "iteration,lambda,g_estimate,residual,satisfied\n";
      f.precision(12);
      for (const auto& h : cell.lambda_history) {
        KKTRecord rec = kkt_check(h.lambda, h.g_estimate, 0.05);
        f << h.iteration << ',' << h.lambda << ',' << h.g_estimate << ','
          << rec.residual << ',' << (rec.satisfied ? 1 : 0) << '\n';
      }
    }
    write_episodes_csv((fs::path(out_dir) / ("episodes_" + tag + ".csv")).string(),
                       cell.eval_traces, artifact.config.env.n);
  }
}

// ---- oracle validation suite ----

namespace {

struct OracleCase {
  std::string name;
  FiniteGame game;
  AscentOptions options;
  // Optional expectations.
  std::optional<bool> expect_feasible;
  std::optional<double> expect_switching_lambda;
  double lambda_tol = 0.02;
  std::optional<std::vector<int>> expect_profile;
  std::optional<bool> expect_smgne;
};

void check_invariants(const OracleCase& oc, const AscentResult& result,
                      std::vector<std::string>& failures) {
  const FiniteGame& game = oc.game;
  auto rows = enumerate_profiles(game);

  // Weak duality: every iterate's dual value bounds every feasible return.
  double best_feasible_return = -std::numeric_limits<double>::infinity();
  bool any_feasible = false;
  for (const auto& row : rows) {
    if (row.g <= 0.0) {
      any_feasible = true;
      best_feasible_return = std::max(best_feasible_return, row.ret);
    }
  }
  for (const auto& it : result.log) {
    if (any_feasible && it.penalized < best_feasible_return - 1e-9) {
      failures.push_back("weak duality violated at iterate " +
                         std::to_string(it.iter));
      break;
    }
  }

  // Midpoint convexity of d(lambda) on a grid.
  double hi = std::max(1.0, 2.0 * result.certificate.lambda_star);
  const int grid = 41;
  for (int i = 0; i + 2 < grid; ++i) {
    double a = hi * i / (grid - 1);
    double c = hi * (i + 2) / (grid - 1);
    double b = 0.5 * (a + c);
    if (dual_function(game, b) >
        0.5 * (dual_function(game, a) + dual_function(game, c)) + 1e-9) {
      failures.push_back("dual function failed midpoint convexity");
      break;
    }
  }

  if (any_feasible) {
    if (!result.feasible_found || result.certificate.pi_star < 0) {
      failures.push_back("feasible profile exists but none was returned");
      return;
    }
    if (game.g(result.certificate.pi_star) > 0.0) {
      failures.push_back("returned profile violates the constraint");
    }
    double value = game.returns[result.certificate.pi_star] -
                   result.certificate.lambda_star *
                       game.g(result.certificate.pi_star);
    if (value + 1e-9 < dual_function(game, result.certificate.lambda_star)) {
      failures.push_back("returned profile is not penalized-optimal at lambda*");
    }
    // KKT-satisfied certificates must pass the epsilon-relaxed deviation scan.
    if (result.certificate.kkt.satisfied) {
      double tol = result.certificate.kkt.epsilon *
                   (1.0 + result.certificate.lambda_star);
      auto dev = verify_smgne(game, result.certificate.pi_star, tol);
      if (!dev.is_equilibrium) {
        failures.push_back("KKT-satisfied certificate failed the deviation scan");
      }
    }
  } else {
    if (result.status != AscentStatus::Infeasible || result.feasible_found) {
      failures.push_back("infeasible game not reported as infeasible");
    }
  }
}

OracleCaseResult run_case(const OracleCase& oc) {
  OracleCaseResult res;
  res.name = oc.name;
  res.ascent = exact_dual_ascent(oc.game, oc.options);
  check_invariants(oc, res.ascent, res.failures);

  if (oc.expect_feasible &&
      res.ascent.feasible_found != *oc.expect_feasible) {
    res.failures.push_back("expected feasible=" +
                           std::string(*oc.expect_feasible ? "true" : "false"));
  }
  if (oc.expect_switching_lambda) {
    if (!res.ascent.switching_lambda) {
      res.failures.push_back("expected a switching lambda, none detected");
    } else if (std::abs(*res.ascent.switching_lambda -
                        *oc.expect_switching_lambda) > oc.lambda_tol) {
      res.failures.push_back(
          "switching lambda " + std::to_string(*res.ascent.switching_lambda) +
          " outside tolerance of " +
          std::to_string(*oc.expect_switching_lambda));
    }
  }
  if (oc.expect_profile) {
    int want = oc.game.profile_index(*oc.expect_profile);
    if (res.ascent.certificate.pi_star != want) {
      res.failures.push_back(
          "returned profile " +
          oc.game.profile_label(res.ascent.certificate.pi_star) +
          ", expected " + oc.game.profile_label(want));
    }
  }
  if (oc.expect_smgne) {
    bool got = res.ascent.certificate.pi_star >= 0 &&
               verify_smgne(oc.game, res.ascent.certificate.pi_star)
                   .is_equilibrium;
    if (got != *oc.expect_smgne) {
      res.failures.push_back("SM-GNE verification mismatch");
    }
  }
  res.passed = res.failures.empty();
  return res;
}

std::vector<OracleCase> builtin_cases() {
  std::vector<OracleCase> cases;
  {
    OracleCase oc;
    oc.name = "chore";
    oc.game = chore_game(0.9);
    oc.options.eta = 0.01;
    oc.expect_feasible = true;
    oc.expect_switching_lambda = 0.2;
    oc.expect_profile = std::vector<int>{0, 0};
    oc.expect_smgne = true;
    cases.push_back(std::move(oc));
  }
  {
    // Every profile keeps one agent idle, so no profile reaches tau = 0.9.
    OracleCase oc;
    oc.name = "infeasible-tau";
    oc.game = make_table_game("infeasible-tau", {2, 2}, {0.5, 0.9, 0.7, 0.6},
                              {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}, {4.0, 0.0}},
                              FairnessThreshold(0.9));
    oc.options.eta = 0.05;
    oc.options.lambda_max = 5.0;
    oc.expect_feasible = false;
    cases.push_back(std::move(oc));
  }
  {
    // The return maximizer already balances the workload: lambda stays 0.
    OracleCase oc;
    oc.name = "slack-at-optimum";
    oc.game = make_table_game("slack-at-optimum", {2, 2}, {1.0, 0.5, 0.5, 0.2},
                              {{1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}},
                              FairnessThreshold(0.85));
    oc.expect_feasible = true;
    oc.expect_profile = std::vector<int>{0, 0};
    oc.expect_smgne = true;
    cases.push_back(std::move(oc));
  }
  return cases;
}

OracleCase parse_case(const json& j, int index) {
  OracleCase oc;
  oc.name = j.value("name", "game-" + std::to_string(index));
  double tau = j.at("tau").get<double>();
  if (j.contains("table")) {
    const json& t = j.at("table");
    std::vector<std::vector<std::string>> names;
    if (t.contains("policy_names")) {
      names = t.at("policy_names").get<std::vector<std::vector<std::string>>>();
    }
    oc.game = make_table_game(
        oc.name, t.at("policy_counts").get<std::vector<int>>(),
        t.at("returns").get<std::vector<double>>(),
        t.at("workloads").get<std::vector<std::vector<double>>>(),
        FairnessThreshold(tau), std::move(names));
  } else if (j.contains("env")) {
    const json& e = j.at("env");
    std::string type = e.at("type").get<std::string>();
    std::unique_ptr<Env> proto;
    if (type == "chore") {
      ChoreConfig cc;
      cc.horizon = e.value("horizon", cc.horizon);
      proto = std::make_unique<ChoreEnv>(cc);
    } else if (type == "hospital") {
      EnvConfig env_cfg;
      env_cfg.n = e.value("n", env_cfg.n);
      env_cfg.c_required = e.value("c_required", env_cfg.c_required);
      env_cfg.b_required = e.value("b_required", env_cfg.b_required);
      env_cfg.horizon = e.value("horizon", env_cfg.horizon);
      env_cfg.energy_max = e.value("energy_max", env_cfg.energy_max);
      env_cfg.energy_enabled = e.value("energy_enabled", env_cfg.energy_enabled);
      if (e.value("skill_preset", std::string("heterogeneous")) == "uniform") {
        env_cfg.skill_preset = SkillPreset::Uniform;
      }
      if (e.contains("start_stations")) {
        for (const auto& name : e.at("start_stations")) {
          auto st = station_from_name(name.get<std::string>());
          if (!st) {
            throw std::invalid_argument("oracle suite: unknown station");
          }
          env_cfg.start_stations.push_back(*st);
        }
      }
      proto = std::make_unique<HospitalEnv>(env_cfg);
    } else {
      throw std::invalid_argument("oracle suite: unknown env type " + type);
    }
    auto policies = j.at("policies").get<std::vector<std::vector<int>>>();
    ReturnMode mode = j.value("return_mode", std::string("average")) ==
                              std::string("discounted")
                          ? ReturnMode::Discounted
                          : ReturnMode::LongRunAverage;
    double gamma = j.value("gamma", 0.99);
    oc.game = game_from_env(*proto, policies, FairnessThreshold(tau), mode,
                            gamma);
    oc.game.name = oc.name;
  } else {
    throw std::invalid_argument("oracle suite: game needs 'table' or 'env'");
  }
  if (j.contains("ascent")) {
    const json& a = j.at("ascent");
    oc.options.eta = a.value("eta", oc.options.eta);
    oc.options.max_iter = a.value("max_iter", oc.options.max_iter);
    oc.options.lambda0 = a.value("lambda0", oc.options.lambda0);
    oc.options.lambda_max = a.value("lambda_max", oc.options.lambda_max);
    oc.options.kkt_epsilon = a.value("kkt_epsilon", oc.options.kkt_epsilon);
  }
  if (j.contains("expect")) {
    const json& e = j.at("expect");
    if (e.contains("feasible")) oc.expect_feasible = e.at("feasible").get<bool>();
    if (e.contains("switching_lambda")) {
      oc.expect_switching_lambda = e.at("switching_lambda").get<double>();
    }
    oc.lambda_tol = e.value("lambda_tol", oc.lambda_tol);
    if (e.contains("profile")) {
      oc.expect_profile = e.at("profile").get<std::vector<int>>();
    }
    if (e.contains("smgne")) oc.expect_smgne = e.at("smgne").get<bool>();
  }
  return oc;
}

}  // namespace

bool OracleSuiteReport::all_passed() const {
  for (const auto& c : cases) {
    if (!c.passed) return false;
  }
  return !cases.empty();
}

OracleSuiteReport run_oracle_suite() {
  OracleSuiteReport report;
  for (const auto& oc : builtin_cases()) report.cases.push_back(run_case(oc));
  return report;
}

OracleSuiteReport run_oracle_suite_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open suite file " + path);
  json j = json::parse(f);  // parse_error reports line/byte diagnostics
  if (!j.contains("games") || !j.at("games").is_array()) {
    throw std::invalid_argument("oracle suite: top-level 'games' array required");
  }
  OracleSuiteReport report;
  int index = 0;
  for (const auto& game : j.at("games")) {
    report.cases.push_back(run_case(parse_case(game, index++)));
  }
  return report;
}

void print_oracle_report(std::ostream& out, const OracleSuiteReport& report) {
  for (const auto& c : report.cases) {
    out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
    if (c.ascent.switching_lambda) {
      out << " (switching lambda " << *c.ascent.switching_lambda << ")";
    }
    out << '\n';
    for (const auto& f : c.failures) out << "       - " << f << '\n';
  }
  out << (report.all_passed() ? "oracle suite: all cases passed"
                              : "oracle suite: FAILURES present")
      << '\n';
}

}  // namespace fairgne
