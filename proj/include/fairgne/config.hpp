#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fairgne/learner.hpp"
#include "fairgne/sim.hpp"

namespace fairgne {

// One row of the method grid: none, gini:<lambda>, jfi:<lambda>, or
// fair-gne:<tau>.
struct MethodSpec {
  PenaltyMode mode = PenaltyMode::None;
  double lambda_fixed = 0.0;
  double tau = 0.85;
  std::string label() const;
};

MethodSpec parse_method(const std::string& text);

struct ExperimentConfig {
  EnvConfig env;
  TrainConfig train;  // template; the grid overrides penalty fields per cell
  std::vector<MethodSpec> methods;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int eval_episodes = 50;  // final greedy evaluation per seed
  double alpha = 0.05;     // family-wise level before Bonferroni
  std::string out_dir = "results";
  int workers = 0;  // 0 = hardware concurrency
  void validate() const;
};

// Default grid mirroring the comparison layout: gini:{0,10,50} plus
// fair-gne at tau in {0.55,0.65,0.75,0.85}.
ExperimentConfig default_experiment_config();

// Sectioned key/value file ([env], [train], [dual], [experiment]).
// Unknown sections or keys are configuration errors.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& text);

// Applies a named dual-cadence preset: "main-text" (per-step, eta 0.01),
// "appendix" (every 5000 env steps, eta 5e-4), "episodic" (per-episode,
// eta 0.01).
void apply_cadence_preset(DualRunConfig& dual, const std::string& preset);
std::string cadence_preset_name(const DualRunConfig& dual);

std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace fairgne
