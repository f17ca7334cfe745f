#pragma once

#include <span>
#include <string>
#include <vector>

#include "fairgne/fairness.hpp"

namespace fairgne {

struct TraceStep {
  int t;
  std::vector<int> stations;  // per-agent position label
  std::vector<int> actions;   // per-agent action index
  double team_reward;
  double shaped_reward;
  double jfi;     // F(w_t) after the step
  double g;       // tau - F(w_t)
  double lambda;  // multiplier active when the step was generated
};

// Per-step record of one episode plus its terminal summary.
struct EpisodeTrace {
  std::vector<TraceStep> steps;
  std::vector<int> final_workload;
  bool success = false;
  int final_potential = 0;
  double lambda = 0.0;  // multiplier active during the rollout
  // Steps at which an unseen state forced the idle-action fallback.
  std::vector<int> fallback_steps;
};

double total_reward(const EpisodeTrace& trace);

// sum_t gamma^t (tau - F(w_t)) over the recorded steps.
double discounted_violation(const EpisodeTrace& trace, FairnessThreshold tau,
                            double gamma);

// CSV export, one row per step:
// episode,t,station_0..,action_0..,team_reward,shaped_reward,jfi,g,lambda
void write_episodes_csv(const std::string& path,
                        std::span<const EpisodeTrace> traces, int num_agents);

}  // namespace fairgne
