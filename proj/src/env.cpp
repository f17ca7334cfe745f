#include "fairgne/env.hpp"

#include <stdexcept>

#include "fairgne/fairness.hpp"

namespace fairgne {

HospitalEnv::HospitalEnv(EnvConfig config) : config_(std::move(config)) {
  config_.validate();
  state_ = fairgne::reset(config_, 0);
}

void HospitalEnv::reset(std::uint64_t seed) {
  state_ = fairgne::reset(config_, seed);
}

EnvStepResult HospitalEnv::step(const std::vector<int>& actions) {
  std::vector<Action> acts;
  acts.reserve(actions.size());
  for (int a : actions) {
    if (a < 0 || a >= kNumActions) {
      throw std::invalid_argument("action index out of range");
    }
    acts.push_back(static_cast<Action>(a));
  }
  StepOutcome out = fairgne::step(config_, state_, acts);
  state_ = std::move(out.next_state);
  return {out.team_reward, out.done, out.success, out.fairness_value};
}

bool HospitalEnv::done() const { return is_done(config_, state_); }

std::uint32_t HospitalEnv::legal_mask(int agent) const {
  std::uint32_t mask = 0;
  for (Action a : fairgne::legal_actions(config_, state_, agent)) {
    mask |= 1u << static_cast<int>(a);
  }
  return mask;
}

std::unique_ptr<Env> HospitalEnv::clone() const {
  return std::make_unique<HospitalEnv>(*this);
}

ChoreEnv::ChoreEnv(ChoreConfig config) : config_(config) {
  if (config_.horizon < 1) {
    throw std::invalid_argument("chore game: horizon must be >= 1");
  }
  workload_.assign(2, 0);
}

void ChoreEnv::reset(std::uint64_t /*seed*/) {
  t_ = 0;
  workload_.assign(2, 0);
}

EnvStepResult ChoreEnv::step(const std::vector<int>& actions) {
  if (actions.size() != 2) {
    throw std::invalid_argument("chore game expects two actions");
  }
  if (done()) throw std::logic_error("step called on a finished episode");
  int workers = 0;
  for (int i = 0; i < 2; ++i) {
    if (actions[i] == kWork) {
      ++workload_[i];
      ++workers;
    } else if (actions[i] != kRest) {
      throw std::invalid_argument("chore game action must be 0 or 1");
    }
  }
  ++t_;
  EnvStepResult res;
  res.team_reward = workers == 2   ? config_.reward_both
                    : workers == 1 ? config_.reward_single
                                   : config_.reward_none;
  res.done = t_ >= config_.horizon;
  res.success = false;
  res.fairness_value = jain_index(std::span<const int>(workload_));
  return res;
}

std::unique_ptr<Env> ChoreEnv::clone() const {
  return std::make_unique<ChoreEnv>(*this);
}

}  // namespace fairgne
