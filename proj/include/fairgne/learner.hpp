#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairgne/dual.hpp"
#include "fairgne/env.hpp"
#include "fairgne/stats.hpp"
#include "fairgne/trace.hpp"

namespace fairgne {

enum class BackboneMode { CentralizedJoint, IndependentPerAgent };

enum class PenaltyMode {
  None,       // plain team reward
  FixedGini,  // r - lambda_fixed * Gini(w_t)
  FixedJfi,   // r - lambda_fixed * (tau - F(w_t)), lambda constant
  FairGne,    // r - lambda_t * (tau - F(w_t)), lambda via dual ascent
};

std::string_view penalty_mode_name(PenaltyMode mode);

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  double decay_fraction = 0.6;  // linear decay over this share of episodes
  double value(int episode, int total_episodes) const;
};

// Dual-ascent knobs for the FairGne penalty (and tau/clamp for FixedJfi).
struct DualRunConfig {
  double lambda0 = 0.0;
  double lambda_max = 20.0;
  double eta = 0.01;
  double tau = 0.85;
  DualCadence cadence = DualCadence::PerStep;
  int update_period = 5000;  // env steps between updates (EveryNSteps)
  int mc_rollouts = 4;       // Monte Carlo estimate size (EveryNSteps)
  bool clamp_slack = false;
  int history_stride = 1;
};

struct TrainConfig {
  int episodes = 20000;
  double gamma = 0.99;
  double alpha = 0.1;
  EpsilonSchedule epsilon;
  BackboneMode backbone = BackboneMode::IndependentPerAgent;
  PenaltyMode penalty = PenaltyMode::None;
  double lambda_fixed = 0.0;
  DualRunConfig dual;
  int eval_every = 1000;
  int eval_episodes = 20;
  double epsilon_kkt = 0.05;
  std::uint64_t seed = 0;
  void validate() const;
};

// Tabular value estimates keyed by canonical state strings. Unseen keys
// read as all-zero rows.
struct QTable {
  BackboneMode mode = BackboneMode::IndependentPerAgent;
  int num_agents = 0;
  int num_actions = 0;  // per agent
  std::vector<std::unordered_map<std::string, std::vector<double>>> tables;

  static QTable make(BackboneMode mode, int num_agents, int num_actions);
  int row_size() const;  // num_actions (independent) or num_actions^n
  const std::vector<double>* find_row(int table, const std::string& key) const;
  std::vector<double>& row(int table, const std::string& key);
  std::size_t num_states() const;

  int joint_index(std::span<const int> actions) const;
  std::vector<int> joint_actions(int index) const;
};

struct EvalPoint {
  int episode;  // 1-based episode count at evaluation time
  EvalSummary summary;
};

struct TrainReport {
  std::vector<EvalPoint> evals;
  QTable policy;
  std::vector<DualHistoryEntry> lambda_history;
  double final_lambda = 0.0;
  std::int64_t env_steps = 0;
};

// Episodic epsilon-greedy one-step TD control on the shaped reward.
// Deterministic given (env, config, seed). Throws std::runtime_error with
// the offending state key if a value update goes non-finite.
TrainReport train(const Env& env_prototype, const TrainConfig& config);

// Shaping parameters a greedy rollout reports in its trace columns.
struct ShapingContext {
  PenaltyMode mode = PenaltyMode::None;
  double lambda = 0.0;
  FairnessThreshold tau{0.85};
  bool clamp_slack = false;
};

// epsilon = 0 rollout; states absent from the policy fall back to the
// environment's idle action (recorded in the trace).
EpisodeTrace greedy_rollout(const QTable& policy, const Env& env_prototype,
                            std::uint64_t seed, const ShapingContext& shaping);

// Mean discounted violation over M greedy rollouts: the Monte Carlo
// constraint estimate fed to the dual update in episodic cadences.
double estimate_constraint(const QTable& policy, const Env& env_prototype,
                           int num_rollouts, double gamma,
                           FairnessThreshold tau,
                           std::span<const std::uint64_t> seeds);

// Policy persistence (JSON).
void save_policy(const QTable& policy, const std::string& path);
QTable load_policy(const std::string& path);

}  // namespace fairgne
