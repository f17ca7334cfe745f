#pragma once

#include <random>

#include "fairgne/oracle.hpp"

namespace fairgne::testgen {

// Random finite game with a guaranteed nonempty feasible set and
// well-separated constraint values (|tau - JFI| >= 0.02 for every profile),
// so dual-ascent switching points stay at moderate scale.
inline FiniteGame random_feasible_game(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> agents(2, 3);
  std::uniform_int_distribution<int> policies(2, 4);
  std::uniform_int_distribution<int> work(0, 6);
  std::uniform_int_distribution<int> equal_work(1, 5);
  std::uniform_real_distribution<double> tau_draw(0.45, 0.95);

  while (true) {
    int n = agents(rng);
    std::vector<int> counts(n);
    std::int64_t profiles = 1;
    for (int& c : counts) {
      c = policies(rng);
      profiles *= c;
    }
    std::vector<double> returns(profiles);
    std::vector<std::vector<double>> workloads(profiles);
    for (std::int64_t p = 0; p < profiles; ++p) {
      returns[p] = unit(rng);
      workloads[p].resize(n);
      for (double& w : workloads[p]) w = work(rng);
    }
    // Force one profile onto the equal-workload ray: JFI = 1, so it is
    // feasible for every tau < 1.
    std::int64_t anchor = static_cast<std::int64_t>(unit(rng) * profiles);
    double level = equal_work(rng);
    for (double& w : workloads[anchor]) w = level;

    double tau = tau_draw(rng);
    FiniteGame game = make_table_game("random", counts, returns, workloads,
                                      FairnessThreshold(tau));
    bool separated = true;
    for (std::int64_t p = 0; p < profiles; ++p) {
      if (std::abs(game.g(static_cast<int>(p))) < 0.02) {
        separated = false;
        break;
      }
    }
    if (separated) return game;
  }
}

}  // namespace fairgne::testgen
