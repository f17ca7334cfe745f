#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fairgne/config.hpp"
#include "fairgne/harness.hpp"

using namespace fairgne;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

ExperimentConfig tiny_experiment() {
  ExperimentConfig cfg;
  cfg.env.horizon = 20;
  cfg.train.episodes = 60;
  cfg.train.eval_every = 60;
  cfg.train.eval_episodes = 2;
  cfg.methods = {parse_method("none"), parse_method("fair-gne:0.85")};
  cfg.seeds = {1, 2};
  cfg.eval_episodes = 3;
  cfg.workers = 2;
  return cfg;
}

}  // namespace

TEST_CASE("method grid parsing") {
  MethodSpec none = parse_method("none");
  CHECK(none.mode == PenaltyMode::None);
  CHECK(none.label() == "none");

  MethodSpec gini = parse_method("gini:50");
  CHECK(gini.mode == PenaltyMode::FixedGini);
  CHECK(gini.lambda_fixed == 50.0);
  CHECK(gini.label() == "gini:50");

  MethodSpec fair = parse_method("fair-gne:0.85");
  CHECK(fair.mode == PenaltyMode::FairGne);
  CHECK(fair.tau == 0.85);

  CHECK(parse_method("fair_gne:0.55").mode == PenaltyMode::FairGne);
  CHECK(parse_method("jfi:10").mode == PenaltyMode::FixedJfi);

  CHECK_THROWS_AS(parse_method("qmix"), std::invalid_argument);
  CHECK_THROWS_AS(parse_method("gini:abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_method("fair-gne:1.4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_method("gini:-3"), std::invalid_argument);
}

TEST_CASE("config file parsing honors every section") {
  std::string text = R"(# experiment configuration
[env]
n = 3
c_required = 4
horizon = 40
energy_enabled = false
skill_preset = uniform
start_stations = bed, bed, cart_left

[train]
episodes = 123
gamma = 0.95
alpha = 0.2
backbone = centralized
eval_every = 50

[dual]
cadence = appendix
lambda_max = 15

[experiment]
methods = none, gini:10, fair-gne:0.75
seeds = 4, 5, 6
eval_episodes = 7
out = /tmp/somewhere
workers = 3
)";
  ExperimentConfig cfg = parse_experiment_config(text);
  CHECK(cfg.env.c_required == 4);
  CHECK(cfg.env.horizon == 40);
  CHECK_FALSE(cfg.env.energy_enabled);
  CHECK(cfg.env.skill_preset == SkillPreset::Uniform);
  CHECK(cfg.env.start_stations ==
        std::vector<Station>{Station::Bed, Station::Bed, Station::CartLeft});
  CHECK(cfg.train.episodes == 123);
  CHECK(cfg.train.gamma == 0.95);
  CHECK(cfg.train.backbone == BackboneMode::CentralizedJoint);
  CHECK(cfg.train.dual.cadence == DualCadence::EveryNSteps);
  CHECK(cfg.train.dual.eta == doctest::Approx(5e-4));
  CHECK(cfg.train.dual.lambda_max == 15.0);
  CHECK(cfg.methods.size() == 3);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{4, 5, 6});
  CHECK(cfg.eval_episodes == 7);
  CHECK(cfg.out_dir == "/tmp/somewhere");
  CHECK(cfg.workers == 3);
}

TEST_CASE("config schema violations are reported") {
  CHECK_THROWS_AS(parse_experiment_config("[env]\nunknown_key = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config("[mystery]\nx = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config("[env]\nno_equals_sign\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config("[env\nn = 3\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config("[env]\nn = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_experiment_config("[experiment]\nmethods = warp:9\n"),
      std::invalid_argument);
}

TEST_CASE("cadence presets") {
  DualRunConfig dual;
  apply_cadence_preset(dual, "main-text");
  CHECK(dual.cadence == DualCadence::PerStep);
  CHECK(dual.eta == 0.01);
  apply_cadence_preset(dual, "appendix");
  CHECK(dual.cadence == DualCadence::EveryNSteps);
  CHECK(dual.eta == doctest::Approx(5e-4));
  CHECK(dual.update_period == 5000);
  apply_cadence_preset(dual, "episodic");
  CHECK(dual.cadence == DualCadence::PerEpisode);
  CHECK_THROWS_AS(apply_cadence_preset(dual, "hourly"), std::invalid_argument);
}

TEST_CASE("default grid mirrors the seven comparison rows") {
  ExperimentConfig cfg = default_experiment_config();
  REQUIRE(cfg.methods.size() == 7);
  CHECK(cfg.methods[0].label() == "gini:0");
  CHECK(cfg.methods[2].label() == "gini:50");
  CHECK(cfg.methods[6].label() == "fair-gne:0.85");
}

TEST_CASE("tiny experiment runs, aggregates, and writes its artifacts") {
  ExperimentConfig cfg = tiny_experiment();
  RunArtifact artifact = run_experiment(cfg);
  REQUIRE(artifact.cells.size() == 4);
  for (const auto& cell : artifact.cells) {
    CHECK_FALSE(cell.failed);
    CHECK(cell.final_summary.n_episodes == 3);
  }
  REQUIRE(artifact.aggregates.size() == 2);
  CHECK(artifact.aggregates[0].success.n == 2);
  // One adaptive row vs one baseline: a single comparison at full alpha.
  REQUIRE(artifact.comparisons.size() == 1);
  CHECK(artifact.comparisons[0].method == "fair-gne:0.85");
  CHECK(artifact.comparisons[0].baseline == "none");
  CHECK(artifact.comparisons[0].test.alpha_adjusted == doctest::Approx(0.05));

  std::string md = render_table_markdown(artifact);
  CHECK(md.find("fair-gne:0.85") != std::string::npos);
  CHECK(md.find("| Method |") != std::string::npos);

  auto dir = std::filesystem::temp_directory_path() / "fairgne_artifact_test";
  std::filesystem::remove_all(dir);
  write_artifact(artifact, dir.string());
  CHECK(std::filesystem::exists(dir / "results.json"));
  CHECK(std::filesystem::exists(dir / "table.md"));
  CHECK(std::filesystem::exists(dir / "table.csv"));
  CHECK(std::filesystem::exists(dir / "lambda_trace_fair-gne-0.85_1.csv"));
  CHECK(std::filesystem::exists(dir / "episodes_none_2.csv"));
  // Episode CSV carries the documented column layout.
  std::string header = slurp(dir / "episodes_none_2.csv");
  CHECK(header.rfind("episode,t,station_0,station_1,station_2,action_0,"
                     "action_1,action_2,team_reward,shaped_reward,jfi,g,"
                     "lambda",
                     0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("rerunning an identical config reproduces results.json byte for byte") {
  ExperimentConfig cfg = tiny_experiment();
  RunArtifact a = run_experiment(cfg);
  RunArtifact b = run_experiment(cfg);
  auto dir_a = std::filesystem::temp_directory_path() / "fairgne_repro_a";
  auto dir_b = std::filesystem::temp_directory_path() / "fairgne_repro_b";
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  write_artifact(a, dir_a.string());
  write_artifact(b, dir_b.string());
  CHECK(slurp(dir_a / "results.json") == slurp(dir_b / "results.json"));
  CHECK(slurp(dir_a / "table.csv") == slurp(dir_b / "table.csv"));
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("single-method grid yields a table without significance columns") {
  ExperimentConfig cfg = tiny_experiment();
  cfg.methods = {parse_method("none")};
  RunArtifact artifact = run_experiment(cfg);
  CHECK(artifact.comparisons.empty());
  std::string md = render_table_markdown(artifact);
  CHECK(md.find("none") != std::string::npos);
}

TEST_CASE("builtin oracle suite passes") {
  OracleSuiteReport report = run_oracle_suite();
  for (const auto& c : report.cases) {
    INFO(c.name);
    for (const auto& f : c.failures) INFO(f);
    CHECK(c.passed);
  }
  CHECK(report.all_passed());
}

TEST_CASE("oracle suite file loads, runs, and rejects malformed input") {
  OracleSuiteReport report = run_oracle_suite_file(
      std::string(PROJECT_SOURCE_DIR) + "/suites/oracle_suite.json");
  for (const auto& c : report.cases) {
    INFO(c.name);
    for (const auto& f : c.failures) INFO(f);
    CHECK(c.passed);
  }
  CHECK(report.all_passed());

  auto bad = std::filesystem::temp_directory_path() / "fairgne_bad_suite.json";
  {
    std::ofstream f(bad);
    f << "{ not json";
  }
  CHECK_THROWS(run_oracle_suite_file(bad.string()));
  std::filesystem::remove(bad);

  auto empty = std::filesystem::temp_directory_path() / "fairgne_empty.json";
  {
    std::ofstream f(empty);
    f << "{}";
  }
  CHECK_THROWS_AS(run_oracle_suite_file(empty.string()),
                  std::invalid_argument);
  std::filesystem::remove(empty);
}
