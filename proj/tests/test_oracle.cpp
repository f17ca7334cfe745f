#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fairgne/oracle.hpp"
#include "game_gen.hpp"

using namespace fairgne;

TEST_CASE("chore game enumeration matches the closed form") {
  FiniteGame game = chore_game(0.9);
  auto rows = enumerate_profiles(game);
  REQUIRE(rows.size() == 4);

  // (work, rest): lone worker earns 0.9 with JFI 1/2.
  const ProfileRow& lone = rows[1];
  CHECK(lone.policy == std::vector<int>{0, 1});
  CHECK(lone.ret == doctest::Approx(0.9));
  CHECK(lone.jfi == doctest::Approx(0.5));
  CHECK(lone.g == doctest::Approx(0.4));

  // (rest, rest): nothing happens; zero workload reads as perfectly fair.
  const ProfileRow& idle = rows[3];
  CHECK(idle.ret == doctest::Approx(0.0));
  CHECK(idle.jfi == doctest::Approx(1.0));
  CHECK(idle.g == doctest::Approx(-0.1));

  CHECK(rows[0].ret == doctest::Approx(0.8));
  CHECK(rows[0].g == doctest::Approx(-0.1));
  CHECK(game.profile_label(0) == "(work,work)");
}

TEST_CASE("2x2 cartesian product and cap errors") {
  FiniteGame game = chore_game(0.9);
  CHECK(game.num_profiles() == 4);
  CHECK_THROWS_AS(enumerate_profiles(game, 3), std::length_error);
  CHECK_THROWS_AS(
      make_table_game("too-big", {100, 100, 100, 100}, {}, {},
                      FairnessThreshold(0.5), {}, 1000000),
      std::length_error);
}

TEST_CASE("exact primal on the chore game") {
  FiniteGame game = chore_game(0.9);
  // lambda = 0: ties between the two lone-worker profiles break low.
  CHECK(exact_primal(game, 0.0) == 1);
  // lambda = 1: 0.8 + 0.1 beats 0.9 - 0.4.
  CHECK(exact_primal(game, 1.0) == 0);
  // At the kink both sides agree; ties break to (work,work).
  CHECK(exact_primal(game, 0.2) == 0);
}

TEST_CASE("dual ascent finds the chore switching point") {
  FiniteGame game = chore_game(0.9);
  AscentOptions opt;
  opt.eta = 0.01;
  opt.lambda0 = 0.0;
  AscentResult res = exact_dual_ascent(game, opt);
  CHECK(res.status == AscentStatus::ConvergedCycle);
  REQUIRE(res.switching_lambda.has_value());
  CHECK(*res.switching_lambda == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(res.feasible_found);
  CHECK(res.certificate.pi_star == 0);  // (work, work)
  CHECK(res.certificate.g_value == doctest::Approx(-0.1));
  CHECK(res.certificate.deviation_checked);
  // Residual |0.2 * 0.1| within the 0.05-relative band.
  CHECK(res.certificate.kkt.satisfied);
}

TEST_CASE("feasible return maximizer keeps lambda at zero") {
  FiniteGame game = make_table_game(
      "slack", {2, 2}, {1.0, 0.5, 0.5, 0.2},
      {{1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}, FairnessThreshold(0.85));
  AscentResult res = exact_dual_ascent(game, {});
  CHECK(res.status == AscentStatus::ConvergedStationary);
  CHECK(res.certificate.lambda_star == 0.0);
  CHECK(res.certificate.pi_star == 0);
  CHECK(res.certificate.kkt.satisfied);
  CHECK(res.log.size() <= 20);
}

TEST_CASE("infeasible threshold reports infeasibility, not an exception") {
  FiniteGame game = make_table_game(
      "never-fair", {2, 2}, {0.5, 0.9, 0.7, 0.6},
      {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}, {4.0, 0.0}}, FairnessThreshold(0.9));
  AscentOptions opt;
  opt.eta = 0.05;
  opt.lambda_max = 5.0;
  AscentResult res = exact_dual_ascent(game, opt);
  CHECK(res.status == AscentStatus::Infeasible);
  CHECK_FALSE(res.feasible_found);
  CHECK(res.certificate.pi_star == -1);
}

TEST_CASE("verify_smgne on the chore profiles") {
  FiniteGame game = chore_game(0.9);
  SmgneResult work_work = verify_smgne(game, 0);
  CHECK(work_work.is_equilibrium);
  CHECK(work_work.status == SmgneStatus::Equilibrium);

  // (work, rest) is itself infeasible: vacuous failure, reported as such.
  SmgneResult work_rest = verify_smgne(game, 1);
  CHECK_FALSE(work_rest.is_equilibrium);
  CHECK(work_rest.status == SmgneStatus::InfeasibleProfile);

  // (rest, rest) is feasible but agent deviations to lone work are
  // infeasible, so it also verifies despite its zero return.
  SmgneResult rest_rest = verify_smgne(game, 3);
  CHECK(rest_rest.is_equilibrium);

  CHECK_THROWS_AS(verify_smgne(game, 7), std::invalid_argument);
}

TEST_CASE("verify_smgne reports an improving witness") {
  // tau low enough that the lone-worker deviation is feasible.
  FiniteGame game = chore_game(0.45);
  SmgneResult res = verify_smgne(game, 0);  // (work,work), R=0.8
  CHECK_FALSE(res.is_equilibrium);
  CHECK(res.status == SmgneStatus::ImprovingDeviation);
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->deviation_return == doctest::Approx(0.9));
}

TEST_CASE("feasible team optimum verifies in an identical-payoff game") {
  FiniteGame game = make_table_game(
      "team", {2, 2}, {1.0, 0.7, 0.6, 0.2},
      {{2.0, 2.0}, {1.0, 1.0}, {1.0, 2.0}, {1.0, 1.0}}, FairnessThreshold(0.8));
  // Profile 0 maximizes R over the feasible set.
  CHECK(verify_smgne(game, 0).is_equilibrium);
}

TEST_CASE("dual function is convex and sandwiches feasible returns") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    FiniteGame game = testgen::random_feasible_game(rng);
    double best_feasible = -1e300;
    for (const auto& row : enumerate_profiles(game)) {
      if (row.g <= 0.0) best_feasible = std::max(best_feasible, row.ret);
    }
    for (int i = 0; i < 40; ++i) {
      double a = 0.25 * i;
      double b = 0.25 * (i + 1);
      double mid = 0.5 * (a + b);
      CHECK(dual_function(game, mid) <=
            0.5 * (dual_function(game, a) + dual_function(game, b)) + 1e-9);
      CHECK(dual_function(game, a) >= best_feasible - 1e-9);
    }
  }
}

TEST_CASE("random feasible games: ascent returns feasible penalized-optimal profiles") {
  std::mt19937_64 rng(2024);
  AscentOptions opt;
  opt.eta = 0.01;
  opt.max_iter = 2000000;
  opt.lambda_max = 200.0;
  for (int trial = 0; trial < 40; ++trial) {
    FiniteGame game = testgen::random_feasible_game(rng);
    AscentResult res = exact_dual_ascent(game, opt);
    REQUIRE(res.feasible_found);
    int pi = res.certificate.pi_star;
    CHECK(game.g(pi) <= 0.0);
    double value = game.returns[pi] - res.certificate.lambda_star * game.g(pi);
    CHECK(value >= dual_function(game, res.certificate.lambda_star) - 1e-9);
    // Weak duality along the whole iterate log.
    double best_feasible = -1e300;
    for (const auto& row : enumerate_profiles(game)) {
      if (row.g <= 0.0) best_feasible = std::max(best_feasible, row.ret);
    }
    for (const auto& it : res.log) CHECK(it.penalized >= best_feasible - 1e-9);
    // epsilon-KKT certificates pass the epsilon-relaxed deviation scan.
    if (res.certificate.kkt.satisfied) {
      double tol =
          res.certificate.kkt.epsilon * (1.0 + res.certificate.lambda_star);
      CHECK(verify_smgne(game, pi, tol).is_equilibrium);
    }
  }
}

TEST_CASE("game_from_env reproduces the chore table") {
  ChoreConfig cc;
  cc.horizon = 10;
  ChoreEnv env(cc);
  FiniteGame from_env = game_from_env(
      env, {{ChoreEnv::kWork, ChoreEnv::kRest}, {ChoreEnv::kWork, ChoreEnv::kRest}},
      FairnessThreshold(0.9), ReturnMode::LongRunAverage);
  FiniteGame table = chore_game(0.9);
  REQUIRE(from_env.num_profiles() == 4);
  for (int p = 0; p < 4; ++p) {
    CHECK(from_env.returns[p] == doctest::Approx(table.returns[p]));
    CHECK(from_env.jfi(p) == doctest::Approx(table.jfi(p)));
  }
}
