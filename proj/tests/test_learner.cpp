#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "fairgne/learner.hpp"

using namespace fairgne;

namespace {

// Environment whose fairness signal follows a fixed per-step schedule;
// lets the dual-responsiveness property be tested in isolation.
class FixedFairnessEnv final : public Env {
 public:
  FixedFairnessEnv(double fairness, int horizon)
      : fairness_(fairness), horizon_(horizon), workload_(2, 0) {}

  int num_agents() const override { return 2; }
  int num_actions() const override { return 2; }
  int idle_action() const override { return 0; }
  int horizon() const override { return horizon_; }
  void reset(std::uint64_t) override {
    t_ = 0;
    workload_.assign(2, 0);
  }
  EnvStepResult step(const std::vector<int>&) override {
    ++t_;
    ++workload_[0];
    return {0.0, t_ >= horizon_, false, fairness_};
  }
  bool done() const override { return t_ >= horizon_; }
  int timestep() const override { return t_; }
  const std::vector<int>& workload() const override { return workload_; }
  std::string state_key() const override { return "s"; }
  int position_label(int) const override { return 0; }
  int progress() const override { return 0; }
  std::uint32_t legal_mask(int) const override { return 0b11; }
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<FixedFairnessEnv>(*this);
  }

 private:
  double fairness_;
  int horizon_;
  int t_ = 0;
  std::vector<int> workload_;
};

TrainConfig small_chore_config(PenaltyMode penalty, std::uint64_t seed) {
  TrainConfig tc;
  tc.episodes = 400;
  tc.eval_every = 200;
  tc.eval_episodes = 4;
  tc.penalty = penalty;
  tc.seed = seed;
  tc.dual.tau = 0.9;
  return tc;
}

}  // namespace

TEST_CASE("penalty mode none leaves the lambda history empty") {
  ChoreEnv env;
  TrainReport report = train(env, small_chore_config(PenaltyMode::None, 3));
  CHECK(report.lambda_history.empty());
  CHECK(report.final_lambda == 0.0);
}

TEST_CASE("fixed gini reports its constant weight at every evaluation") {
  ChoreEnv env;
  TrainConfig tc = small_chore_config(PenaltyMode::FixedGini, 3);
  tc.lambda_fixed = 50.0;
  TrainReport report = train(env, tc);
  REQUIRE_FALSE(report.evals.empty());
  for (const auto& point : report.evals) {
    CHECK(point.summary.mean_lambda == doctest::Approx(50.0));
    CHECK(point.summary.std_lambda == doctest::Approx(0.0));
  }
  CHECK(report.lambda_history.empty());
}

TEST_CASE("training is deterministic in the seed") {
  ChoreEnv env;
  TrainConfig tc = small_chore_config(PenaltyMode::FairGne, 17);
  TrainReport a = train(env, tc);
  TrainReport b = train(env, tc);
  CHECK(a.env_steps == b.env_steps);
  CHECK(a.final_lambda == b.final_lambda);
  REQUIRE(a.evals.size() == b.evals.size());
  for (std::size_t i = 0; i < a.evals.size(); ++i) {
    CHECK(a.evals[i].summary.mean_jfi == b.evals[i].summary.mean_jfi);
    CHECK(a.evals[i].summary.mean_return == b.evals[i].summary.mean_return);
  }
  CHECK(a.policy.tables == b.policy.tables);

  TrainConfig other = tc;
  other.seed = 18;
  TrainReport c = train(env, other);
  CHECK(a.policy.tables != c.policy.tables);
}

TEST_CASE("greedy rollout of an untrained policy idles to zero reward") {
  HospitalEnv env{EnvConfig{}};
  QTable empty = QTable::make(BackboneMode::IndependentPerAgent, 3, 8);
  EpisodeTrace trace = greedy_rollout(empty, env, 0, ShapingContext{});
  CHECK_FALSE(trace.success);
  CHECK(total_reward(trace) == 0.0);
  CHECK(static_cast<int>(trace.steps.size()) == env.horizon());
  CHECK_FALSE(trace.fallback_steps.empty());
  for (const auto& s : trace.steps) {
    for (int a : s.actions) CHECK(a == static_cast<int>(Action::Noop));
  }
}

TEST_CASE("greedy rollout respects the horizon and the success flag") {
  ChoreEnv env;
  TrainConfig tc = small_chore_config(PenaltyMode::None, 5);
  TrainReport report = train(env, tc);
  EpisodeTrace trace = greedy_rollout(report.policy, env, 0, ShapingContext{});
  CHECK(static_cast<int>(trace.steps.size()) <= env.horizon());
  CHECK_FALSE(trace.success);  // the chore game has no terminal success

  HospitalEnv henv{EnvConfig{}};
  QTable empty = QTable::make(BackboneMode::IndependentPerAgent, 3, 8);
  EpisodeTrace htrace = greedy_rollout(empty, henv, 0, ShapingContext{});
  CHECK(static_cast<int>(htrace.steps.size()) <= henv.horizon());
}

TEST_CASE("estimate_constraint equals the discounted violation of one rollout") {
  HospitalEnv env{EnvConfig{}};
  QTable empty = QTable::make(BackboneMode::IndependentPerAgent, 3, 8);
  FairnessThreshold tau(0.85);
  double one = estimate_constraint(empty, env, 1, 0.99, tau, {});
  EpisodeTrace trace = greedy_rollout(empty, env, 0, ShapingContext{});
  CHECK(one == doctest::Approx(discounted_violation(trace, tau, 0.99)));
  // Idle policy: workload stays zero, so F = 1 at every step.
  double expected = 0.0, discount = 1.0;
  for (int t = 0; t < env.horizon(); ++t) {
    expected += discount * (0.85 - 1.0);
    discount *= 0.99;
  }
  CHECK(one == doctest::Approx(expected).epsilon(1e-12));
  // Deterministic rollouts: the M-sample mean equals the single sample.
  CHECK(estimate_constraint(empty, env, 4, 0.99, tau, {}) ==
        doctest::Approx(one));
}

TEST_CASE("fair_gne with a frozen multiplier replays the fixed-jfi penalty") {
  ChoreEnv env;
  for (double c : {0.0, 0.5, 3.0}) {
    TrainConfig fixed = small_chore_config(PenaltyMode::FixedJfi, 11);
    fixed.lambda_fixed = c;
    TrainConfig frozen = small_chore_config(PenaltyMode::FairGne, 11);
    frozen.dual.lambda0 = c;
    frozen.dual.eta = 0.0;
    TrainReport a = train(env, fixed);
    TrainReport b = train(env, frozen);
    CHECK(a.policy.tables == b.policy.tables);
    REQUIRE(a.evals.size() == b.evals.size());
    for (std::size_t i = 0; i < a.evals.size(); ++i) {
      CHECK(a.evals[i].summary.mean_jfi ==
            doctest::Approx(b.evals[i].summary.mean_jfi));
      CHECK(a.evals[i].summary.mean_lambda ==
            doctest::Approx(b.evals[i].summary.mean_lambda));
    }
  }
}

TEST_CASE("with zero penalty weight every mode produces the same run") {
  ChoreEnv env;
  TrainConfig none = small_chore_config(PenaltyMode::None, 29);
  TrainConfig gini = small_chore_config(PenaltyMode::FixedGini, 29);
  gini.lambda_fixed = 0.0;
  TrainConfig fair = small_chore_config(PenaltyMode::FairGne, 29);
  fair.dual.lambda0 = 0.0;
  fair.dual.eta = 0.0;
  TrainReport a = train(env, none);
  TrainReport b = train(env, gini);
  TrainReport c = train(env, fair);
  CHECK(a.policy.tables == b.policy.tables);
  CHECK(a.policy.tables == c.policy.tables);
  CHECK(a.evals.back().summary.mean_return ==
        doctest::Approx(b.evals.back().summary.mean_return));
  CHECK(a.evals.back().summary.mean_return ==
        doctest::Approx(c.evals.back().summary.mean_return));
}

TEST_CASE("dual responsiveness under persistent violation and slack") {
  // F = 0.5 < tau forever: every statewise estimate is positive, so lambda
  // never decreases and strictly climbs until the cap.
  FixedFairnessEnv violating(0.5, 10);
  TrainConfig tc = small_chore_config(PenaltyMode::FairGne, 1);
  tc.episodes = 50;
  tc.eval_every = 50;
  tc.dual.tau = 0.9;
  TrainReport rep = train(violating, tc);
  REQUIRE_FALSE(rep.lambda_history.empty());
  double last = 0.0;
  for (const auto& h : rep.lambda_history) {
    CHECK(h.lambda >= last - 1e-12);
    last = h.lambda;
  }
  CHECK(rep.final_lambda > 0.0);

  // F = 1.0 > tau forever with an interior start: lambda only decays.
  FixedFairnessEnv slack(1.0, 10);
  TrainConfig tc2 = tc;
  tc2.dual.lambda0 = 5.0;
  TrainReport rep2 = train(slack, tc2);
  double prev = tc2.dual.lambda0;
  for (const auto& h : rep2.lambda_history) {
    CHECK(h.lambda <= prev + 1e-12);
    prev = h.lambda;
  }
  CHECK(rep2.final_lambda < 5.0);
}

TEST_CASE("fair_gne on the chore game learns to share the work") {
  ChoreEnv env;
  TrainConfig tc;
  tc.episodes = 3000;
  tc.eval_every = 3000;
  tc.eval_episodes = 1;
  tc.penalty = PenaltyMode::FairGne;
  tc.dual.tau = 0.9;
  tc.dual.cadence = DualCadence::PerStep;
  tc.seed = 7;
  TrainReport report = train(env, tc);
  EpisodeTrace trace =
      greedy_rollout(report.policy, env, 0,
                     ShapingContext{PenaltyMode::FairGne, report.final_lambda,
                                    FairnessThreshold(0.9), false});
  // Greedy joint action should be (work, work): both workloads advance.
  CHECK(trace.final_workload[0] == env.horizon());
  CHECK(trace.final_workload[1] == env.horizon());
}

TEST_CASE("centralized backbone learns the chore game too") {
  ChoreEnv env;
  TrainConfig tc = small_chore_config(PenaltyMode::FairGne, 13);
  tc.backbone = BackboneMode::CentralizedJoint;
  tc.episodes = 2000;
  TrainReport report = train(env, tc);
  CHECK(report.policy.tables.size() == 1);
  CHECK(report.policy.row_size() == 4);
  EpisodeTrace trace =
      greedy_rollout(report.policy, env, 0,
                     ShapingContext{PenaltyMode::FairGne, report.final_lambda,
                                    FairnessThreshold(0.9), false});
  CHECK_FALSE(trace.steps.empty());
}

TEST_CASE("policy save and load round-trips the greedy behavior") {
  ChoreEnv env;
  TrainConfig tc = small_chore_config(PenaltyMode::FairGne, 19);
  TrainReport report = train(env, tc);
  std::string path =
      (std::filesystem::temp_directory_path() / "fairgne_policy_test.json")
          .string();
  save_policy(report.policy, path);
  QTable loaded = load_policy(path);
  CHECK(loaded.tables == report.policy.tables);
  CHECK(loaded.num_actions == report.policy.num_actions);
  std::filesystem::remove(path);
}

TEST_CASE("invalid train configs are rejected") {
  TrainConfig tc;
  tc.episodes = 0;
  CHECK_THROWS_AS(tc.validate(), std::invalid_argument);
  tc = TrainConfig{};
  tc.gamma = 1.0;
  CHECK_THROWS_AS(tc.validate(), std::invalid_argument);
  tc = TrainConfig{};
  tc.alpha = 0.0;
  CHECK_THROWS_AS(tc.validate(), std::invalid_argument);
  tc = TrainConfig{};
  tc.penalty = PenaltyMode::FairGne;
  tc.dual.tau = 1.5;
  CHECK_THROWS_AS(tc.validate(), std::invalid_argument);
}
