#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fairgne/sim.hpp"

namespace fairgne {

struct EnvStepResult {
  double team_reward = 0.0;
  bool done = false;
  bool success = false;
  double fairness_value = 1.0;  // Jain index of the cumulative workload
};

// Minimal surface the tabular learners train against. Implementations are
// single-threaded; clone() produces an independent instance for evaluation
// rollouts.
class Env {
 public:
  virtual ~Env() = default;
  virtual int num_agents() const = 0;
  virtual int num_actions() const = 0;
  // Fallback action for states absent from a policy (hospital: noop).
  virtual int idle_action() const = 0;
  virtual int horizon() const = 0;
  virtual void reset(std::uint64_t seed) = 0;
  virtual EnvStepResult step(const std::vector<int>& actions) = 0;
  virtual bool done() const = 0;
  virtual int timestep() const = 0;
  virtual const std::vector<int>& workload() const = 0;
  virtual std::string state_key() const = 0;
  virtual int position_label(int agent) const = 0;
  virtual int progress() const = 0;
  // Bit i set iff action i is legal for the agent in the current state.
  virtual std::uint32_t legal_mask(int agent) const = 0;
  virtual std::unique_ptr<Env> clone() const = 0;
};

// The resuscitation simulator behind the Env surface.
class HospitalEnv final : public Env {
 public:
  explicit HospitalEnv(EnvConfig config);

  int num_agents() const override { return config_.n; }
  int num_actions() const override { return kNumActions; }
  int idle_action() const override { return static_cast<int>(Action::Noop); }
  int horizon() const override { return config_.horizon; }
  void reset(std::uint64_t seed) override;
  EnvStepResult step(const std::vector<int>& actions) override;
  bool done() const override;
  int timestep() const override { return state_.t; }
  const std::vector<int>& workload() const override { return state_.workload; }
  std::string state_key() const override { return encode_state_key(state_); }
  int position_label(int agent) const override {
    return static_cast<int>(state_.agents[agent].station);
  }
  int progress() const override { return milestone_potential(state_); }
  std::uint32_t legal_mask(int agent) const override;
  std::unique_ptr<Env> clone() const override;

  const EnvConfig& config() const { return config_; }
  const SimState& state() const { return state_; }

 private:
  EnvConfig config_;
  SimState state_;
};

// Single-state repeated chore game: each agent works (0) or rests (1).
// Exactly one worker earns reward_single, both earn reward_both, none earn
// nothing. Workers accumulate workload. The exactly solvable benchmark for
// the equilibrium oracle.
struct ChoreConfig {
  int horizon = 20;
  double reward_both = 0.8;
  double reward_single = 0.9;
  double reward_none = 0.0;
};

class ChoreEnv final : public Env {
 public:
  static constexpr int kWork = 0;
  static constexpr int kRest = 1;

  explicit ChoreEnv(ChoreConfig config = {});

  int num_agents() const override { return 2; }
  int num_actions() const override { return 2; }
  int idle_action() const override { return kRest; }
  int horizon() const override { return config_.horizon; }
  void reset(std::uint64_t seed) override;
  EnvStepResult step(const std::vector<int>& actions) override;
  bool done() const override { return t_ >= config_.horizon; }
  int timestep() const override { return t_; }
  const std::vector<int>& workload() const override { return workload_; }
  std::string state_key() const override { return "chore"; }
  int position_label(int) const override { return 0; }
  int progress() const override { return 0; }
  std::uint32_t legal_mask(int) const override { return 0b11; }
  std::unique_ptr<Env> clone() const override;

  const ChoreConfig& config() const { return config_; }

 private:
  ChoreConfig config_;
  int t_ = 0;
  std::vector<int> workload_;
};

}  // namespace fairgne
