#pragma once

#include <cstdint>
#include <vector>

#include "fairgne/fairness.hpp"

namespace fairgne {

// When the multiplier moves relative to the environment loop.
enum class DualCadence {
  PerStep,      // every environment step, statewise g (main-text preset)
  PerEpisode,   // once per episode, discounted violation of that episode
  EveryNSteps,  // every update_period env steps, Monte Carlo estimate (appendix preset)
};

struct DualHistoryEntry {
  std::int64_t iteration;
  double lambda;
  double g_estimate;
};

// Adaptive Lagrange multiplier for the shared fairness constraint.
// lambda stays inside [0, lambda_max] under every update.
struct DualState {
  double lambda = 0.0;
  double lambda_max = 20.0;
  double eta_lambda = 0.01;
  FairnessThreshold tau{0.85};
  int update_period = 1;
  // Penalty term in the shaped reward: signed (tau - F) by default, or
  // clamped to max(0, tau - F) so fairness slack earns no bonus. The dual
  // update always sees the signed estimate either way.
  bool clamp_slack = false;
  // Record every history_stride-th update (1 = record all).
  int history_stride = 1;
  std::vector<DualHistoryEntry> history;
  std::int64_t updates = 0;
};

// r~ = r - lambda * (tau - F), or with the clamp, r - lambda * max(0, tau - F).
double shaped_reward(double r, const DualState& dual, double fairness_value);

// Projected ascent step lambda' = clip(lambda + eta * g, 0, lambda_max).
// Appends to history per the stride; all other fields unchanged.
// Throws std::runtime_error on non-finite g_estimate.
DualState dual_update(DualState dual, double g_estimate);

struct KKTRecord {
  double lambda;
  double g;
  double residual;  // |lambda * g|
  bool feasible;    // g <= 0
  double epsilon;
  bool satisfied;   // feasible and residual <= epsilon * (1 + lambda)
};

KKTRecord kkt_check(double lambda, double g_estimate, double epsilon);
KKTRecord kkt_check(const DualState& dual, double g_estimate, double epsilon);

}  // namespace fairgne
