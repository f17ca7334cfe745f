#include "fairgne/learner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace fairgne {

std::string_view penalty_mode_name(PenaltyMode mode) {
  switch (mode) {
    case PenaltyMode::None: return "none";
    case PenaltyMode::FixedGini: return "fixed_gini";
    case PenaltyMode::FixedJfi: return "fixed_jfi";
    case PenaltyMode::FairGne: return "fair_gne";
  }
  return "unknown";
}

double EpsilonSchedule::value(int episode, int total_episodes) const {
  double horizon = decay_fraction * total_episodes;
  if (horizon <= 0.0) return end;
  double frac = std::min(1.0, episode / horizon);
  return start + frac * (end - start);
}

void TrainConfig::validate() const {
  if (episodes < 1) throw std::invalid_argument("train config: episodes >= 1");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("train config: gamma in (0,1)");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("train config: alpha > 0");
  if (!(epsilon.start >= 0.0 && epsilon.start <= 1.0 && epsilon.end >= 0.0 &&
        epsilon.end <= 1.0)) {
    throw std::invalid_argument("train config: epsilon within [0,1]");
  }
  if (eval_every < 1) throw std::invalid_argument("train config: eval_every >= 1");
  if (eval_episodes < 1) {
    throw std::invalid_argument("train config: eval_episodes >= 1");
  }
  if (lambda_fixed < 0.0) {
    throw std::invalid_argument("train config: lambda_fixed >= 0");
  }
  if (penalty == PenaltyMode::FairGne || penalty == PenaltyMode::FixedJfi) {
    FairnessThreshold check(dual.tau);  // throws outside (0,1)
    (void)check;
  }
  if (!(dual.eta >= 0.0) || !(dual.lambda_max > 0.0) || dual.lambda0 < 0.0) {
    throw std::invalid_argument("train config: invalid dual parameters");
  }
  if (dual.update_period < 1 || dual.mc_rollouts < 1) {
    throw std::invalid_argument("train config: invalid dual cadence");
  }
}

QTable QTable::make(BackboneMode mode, int num_agents, int num_actions) {
  QTable q;
  q.mode = mode;
  q.num_agents = num_agents;
  q.num_actions = num_actions;
  q.tables.resize(mode == BackboneMode::CentralizedJoint ? 1 : num_agents);
  return q;
}

int QTable::row_size() const {
  if (mode == BackboneMode::IndependentPerAgent) return num_actions;
  int size = 1;
  for (int i = 0; i < num_agents; ++i) size *= num_actions;
  return size;
}

const std::vector<double>* QTable::find_row(int table,
                                            const std::string& key) const {
  auto it = tables[table].find(key);
  return it == tables[table].end() ? nullptr : &it->second;
}

std::vector<double>& QTable::row(int table, const std::string& key) {
  auto [it, inserted] = tables[table].try_emplace(key);
  if (inserted) it->second.assign(row_size(), 0.0);
  return it->second;
}

std::size_t QTable::num_states() const {
  std::size_t total = 0;
  for (const auto& t : tables) total = std::max(total, t.size());
  return total;
}

int QTable::joint_index(std::span<const int> actions) const {
  int idx = 0;
  for (int i = 0; i < num_agents; ++i) idx = idx * num_actions + actions[i];
  return idx;
}

std::vector<int> QTable::joint_actions(int index) const {
  std::vector<int> actions(num_agents);
  for (int i = num_agents - 1; i >= 0; --i) {
    actions[i] = index % num_actions;
    index /= num_actions;
  }
  return actions;
}

namespace {

int lowest_bit(std::uint32_t mask) {
  for (int i = 0; i < 32; ++i) {
    if (mask & (1u << i)) return i;
  }
  return 0;
}

// Highest value among legal actions, ties to the lowest index. A missing
// row reads as all zeros, so the lowest legal index wins.
int argmax_masked(const std::vector<double>* row, std::uint32_t mask) {
  if (row == nullptr) return lowest_bit(mask);
  int best = -1;
  for (int i = 0; i < static_cast<int>(row->size()); ++i) {
    if (!(mask & (1u << i))) continue;
    if (best < 0 || (*row)[i] > (*row)[best]) best = i;
  }
  return best < 0 ? lowest_bit(mask) : best;
}

double max_masked(const std::vector<double>* row, std::uint32_t mask) {
  if (row == nullptr) return 0.0;
  bool any = false;
  double m = 0.0;
  for (int i = 0; i < static_cast<int>(row->size()); ++i) {
    if (!(mask & (1u << i))) continue;
    if (!any || (*row)[i] > m) {
      m = (*row)[i];
      any = true;
    }
  }
  return any ? m : 0.0;
}

int sample_masked(std::uint32_t mask, std::mt19937_64& rng) {
  int count = 0;
  for (int i = 0; i < 32; ++i) {
    if (mask & (1u << i)) ++count;
  }
  std::uniform_int_distribution<int> pick(0, count - 1);
  int k = pick(rng);
  for (int i = 0; i < 32; ++i) {
    if (mask & (1u << i)) {
      if (k == 0) return i;
      --k;
    }
  }
  return lowest_bit(mask);
}

// Joint-action legality for the centralized backbone.
bool joint_legal(const QTable& q, int joint_index,
                 std::span<const std::uint32_t> masks) {
  for (int i = q.num_agents - 1; i >= 0; --i) {
    int a = joint_index % q.num_actions;
    joint_index /= q.num_actions;
    if (!(masks[i] & (1u << a))) return false;
  }
  return true;
}

int argmax_joint_masked(const QTable& q, const std::vector<double>* row,
                        std::span<const std::uint32_t> masks) {
  int best = -1;
  int size = q.row_size();
  for (int j = 0; j < size; ++j) {
    if (!joint_legal(q, j, masks)) continue;
    double v = row == nullptr ? 0.0 : (*row)[j];
    if (best < 0 ||
        (row != nullptr && v > (*row)[best])) {
      best = j;
    }
    if (row == nullptr) break;  // all zeros: first legal joint action wins
  }
  return best < 0 ? 0 : best;
}

double max_joint_masked(const QTable& q, const std::vector<double>* row,
                        std::span<const std::uint32_t> masks) {
  if (row == nullptr) return 0.0;
  bool any = false;
  double m = 0.0;
  int size = q.row_size();
  for (int j = 0; j < size; ++j) {
    if (!joint_legal(q, j, masks)) continue;
    if (!any || (*row)[j] > m) {
      m = (*row)[j];
      any = true;
    }
  }
  return any ? m : 0.0;
}

struct Shaper {
  PenaltyMode mode;
  double lambda_fixed;
  DualState* dual;  // FairGne only
  FairnessThreshold tau;
  bool clamp;

  double operator()(double reward, double fairness_value,
                    std::span<const int> workload) const {
    switch (mode) {
      case PenaltyMode::None:
        return reward;
      case PenaltyMode::FixedGini:
        return reward - lambda_fixed * gini_index(workload);
      case PenaltyMode::FixedJfi: {
        double g = tau.value - fairness_value;
        if (clamp) g = std::max(0.0, g);
        return reward - lambda_fixed * g;
      }
      case PenaltyMode::FairGne:
        return shaped_reward(reward, *dual, fairness_value);
    }
    return reward;
  }

  double active_lambda() const {
    switch (mode) {
      case PenaltyMode::None: return 0.0;
      case PenaltyMode::FixedGini:
      case PenaltyMode::FixedJfi: return lambda_fixed;
      case PenaltyMode::FairGne: return dual->lambda;
    }
    return 0.0;
  }
};

// One epsilon-greedy joint action over the legal sets; consumes the RNG
// identically across penalty modes so shaping never perturbs the
// exploration stream.
std::vector<int> select_actions(const QTable& q, const std::string& key,
                                std::span<const std::uint32_t> masks,
                                double eps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> actions(q.num_agents);
  if (q.mode == BackboneMode::CentralizedJoint) {
    if (unit(rng) < eps) {
      for (int i = 0; i < q.num_agents; ++i) {
        actions[i] = sample_masked(masks[i], rng);
      }
      return actions;
    }
    return q.joint_actions(
        argmax_joint_masked(q, q.find_row(0, key), masks));
  }
  for (int i = 0; i < q.num_agents; ++i) {
    if (unit(rng) < eps) {
      actions[i] = sample_masked(masks[i], rng);
    } else {
      actions[i] = argmax_masked(q.find_row(i, key), masks[i]);
    }
  }
  return actions;
}

void td_update(QTable& q, const std::string& key,
               const std::vector<int>& actions, double shaped,
               const std::string& next_key,
               std::span<const std::uint32_t> next_masks, bool terminal,
               double alpha, double gamma) {
  if (q.mode == BackboneMode::CentralizedJoint) {
    double target = shaped;
    if (!terminal) {
      target += gamma * max_joint_masked(q, q.find_row(0, next_key),
                                         next_masks);
    }
    double& value = q.row(0, key)[q.joint_index(actions)];
    value += alpha * (target - value);
    if (!std::isfinite(value)) {
      throw std::runtime_error("non-finite value update at state " + key);
    }
    return;
  }
  for (int i = 0; i < q.num_agents; ++i) {
    double target = shaped;
    if (!terminal) {
      target += gamma * max_masked(q.find_row(i, next_key), next_masks[i]);
    }
    double& value = q.row(i, key)[actions[i]];
    value += alpha * (target - value);
    if (!std::isfinite(value)) {
      throw std::runtime_error("non-finite value update at state " + key);
    }
  }
}

std::vector<int> greedy_actions(const QTable& q, const std::string& key,
                                std::span<const std::uint32_t> masks, int idle,
                                std::vector<int>* fallback_agents) {
  std::vector<int> actions(q.num_agents, idle);
  if (q.mode == BackboneMode::CentralizedJoint) {
    const auto* row = q.find_row(0, key);
    if (row == nullptr) {
      if (fallback_agents) {
        for (int i = 0; i < q.num_agents; ++i) fallback_agents->push_back(i);
      }
      return actions;
    }
    return q.joint_actions(argmax_joint_masked(q, row, masks));
  }
  for (int i = 0; i < q.num_agents; ++i) {
    const auto* row = q.find_row(i, key);
    if (row == nullptr) {
      if (fallback_agents) fallback_agents->push_back(i);
      continue;
    }
    actions[i] = argmax_masked(row, masks[i]);
  }
  return actions;
}

std::vector<std::uint32_t> legal_masks(const Env& env) {
  std::vector<std::uint32_t> masks(env.num_agents());
  for (int i = 0; i < env.num_agents(); ++i) masks[i] = env.legal_mask(i);
  return masks;
}

}  // namespace

EpisodeTrace greedy_rollout(const QTable& policy, const Env& env_prototype,
                            std::uint64_t seed,
                            const ShapingContext& shaping) {
  auto env = env_prototype.clone();
  env->reset(seed);
  EpisodeTrace trace;
  trace.lambda = shaping.lambda;
  DualState frozen;
  frozen.lambda = shaping.lambda;
  frozen.tau = shaping.tau;
  frozen.clamp_slack = shaping.clamp_slack;
  Shaper shaper{shaping.mode, shaping.lambda, &frozen, shaping.tau,
                shaping.clamp_slack};
  bool success = false;
  while (!env->done()) {
    int t = env->timestep();
    std::string key = env->state_key();
    std::vector<int> fallback;
    std::vector<std::uint32_t> masks = legal_masks(*env);
    std::vector<int> actions =
        greedy_actions(policy, key, masks, env->idle_action(), &fallback);
    if (!fallback.empty()) trace.fallback_steps.push_back(t);
    EnvStepResult res = env->step(actions);
    success = res.success;
    TraceStep step;
    step.t = t;
    step.stations.resize(env->num_agents());
    for (int i = 0; i < env->num_agents(); ++i) {
      step.stations[i] = env->position_label(i);
    }
    step.actions = actions;
    step.team_reward = res.team_reward;
    step.shaped_reward = shaper(res.team_reward, res.fairness_value,
                                std::span<const int>(env->workload()));
    step.jfi = res.fairness_value;
    step.g = shaping.tau.value - res.fairness_value;
    step.lambda = shaping.lambda;
    trace.steps.push_back(std::move(step));
  }
  trace.final_workload = env->workload();
  trace.success = success;
  trace.final_potential = env->progress();
  return trace;
}

double estimate_constraint(const QTable& policy, const Env& env_prototype,
                           int num_rollouts, double gamma,
                           FairnessThreshold tau,
                           std::span<const std::uint64_t> seeds) {
  if (num_rollouts < 1) {
    throw std::invalid_argument("estimate_constraint: need >= 1 rollout");
  }
  ShapingContext ctx;
  ctx.tau = tau;
  double total = 0.0;
  for (int m = 0; m < num_rollouts; ++m) {
    std::uint64_t seed = m < static_cast<int>(seeds.size()) ? seeds[m] : m;
    EpisodeTrace trace = greedy_rollout(policy, env_prototype, seed, ctx);
    total += discounted_violation(trace, tau, gamma);
  }
  return total / num_rollouts;
}

TrainReport train(const Env& env_prototype, const TrainConfig& config) {
  config.validate();
  auto env = env_prototype.clone();
  QTable q = QTable::make(config.backbone, env->num_agents(),
                          env->num_actions());
  std::mt19937_64 rng(config.seed);

  DualState dual;
  dual.lambda = config.dual.lambda0;
  dual.lambda_max = config.dual.lambda_max;
  dual.eta_lambda = config.dual.eta;
  dual.tau = FairnessThreshold(config.dual.tau);
  dual.update_period = config.dual.update_period;
  dual.clamp_slack = config.dual.clamp_slack;
  dual.history_stride = config.dual.history_stride;

  Shaper shaper{config.penalty, config.lambda_fixed, &dual, dual.tau,
                config.dual.clamp_slack};
  const bool adaptive = config.penalty == PenaltyMode::FairGne;

  TrainReport report;
  std::vector<double> step_fairness;
  step_fairness.reserve(env->horizon());

  for (int ep = 0; ep < config.episodes; ++ep) {
    double eps = config.epsilon.value(ep, config.episodes);
    env->reset(static_cast<std::uint64_t>(ep));
    std::string key = env->state_key();
    std::vector<std::uint32_t> masks = legal_masks(*env);
    step_fairness.clear();

    while (!env->done()) {
      std::vector<int> actions = select_actions(q, key, masks, eps, rng);
      EnvStepResult res = env->step(actions);
      double shaped = shaper(res.team_reward, res.fairness_value,
                             std::span<const int>(env->workload()));
      std::string next_key = env->state_key();
      std::vector<std::uint32_t> next_masks = legal_masks(*env);
      // Horizon truncation is not a real terminal: bootstrap through it so
      // values stay stationary (the state key carries no clock).
      td_update(q, key, actions, shaped, next_key, next_masks, res.success,
                config.alpha, config.gamma);
      step_fairness.push_back(res.fairness_value);
      ++report.env_steps;

      if (adaptive) {
        if (config.dual.cadence == DualCadence::PerStep) {
          dual = dual_update(std::move(dual),
                             dual.tau.value - res.fairness_value);
        } else if (config.dual.cadence == DualCadence::EveryNSteps &&
                   report.env_steps % config.dual.update_period == 0) {
          double g_bar = estimate_constraint(q, env_prototype,
                                             config.dual.mc_rollouts,
                                             config.gamma, dual.tau, {});
          dual = dual_update(std::move(dual), g_bar);
        }
      }
      key = std::move(next_key);
      masks = std::move(next_masks);
    }

    if (adaptive && config.dual.cadence == DualCadence::PerEpisode &&
        !step_fairness.empty()) {
      double g_bar = discounted_violation(
          std::span<const double>(step_fairness), dual.tau, config.gamma);
      dual = dual_update(std::move(dual), g_bar);
    }

    if ((ep + 1) % config.eval_every == 0 || ep + 1 == config.episodes) {
      ShapingContext ctx;
      ctx.mode = config.penalty;
      ctx.lambda = shaper.active_lambda();
      ctx.tau = dual.tau;
      ctx.clamp_slack = config.dual.clamp_slack;
      std::vector<EpisodeTrace> traces;
      traces.reserve(config.eval_episodes);
      for (int e = 0; e < config.eval_episodes; ++e) {
        traces.push_back(greedy_rollout(q, env_prototype, e, ctx));
      }
      EvalPoint point;
      point.episode = ep + 1;
      point.summary = summarize(traces, dual.tau, config.epsilon_kkt,
                                config.gamma);
      report.evals.push_back(std::move(point));
    }
  }

  report.final_lambda = adaptive ? dual.lambda : shaper.active_lambda();
  report.lambda_history = std::move(dual.history);
  report.policy = std::move(q);
  return report;
}

void save_policy(const QTable& policy, const std::string& path) {
  nlohmann::json j;
  j["mode"] = policy.mode == BackboneMode::CentralizedJoint ? "centralized"
                                                            : "independent";
  j["num_agents"] = policy.num_agents;
  j["num_actions"] = policy.num_actions;
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& table : policy.tables) {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [key, values] : table) entries[key] = values;
    tables.push_back(std::move(entries));
  }
  j["tables"] = std::move(tables);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << j.dump(1) << '\n';
}

QTable load_policy(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(f);
  QTable q;
  q.mode = j.at("mode").get<std::string>() == "centralized"
               ? BackboneMode::CentralizedJoint
               : BackboneMode::IndependentPerAgent;
  q.num_agents = j.at("num_agents").get<int>();
  q.num_actions = j.at("num_actions").get<int>();
  for (const auto& table : j.at("tables")) {
    std::unordered_map<std::string, std::vector<double>> entries;
    for (auto it = table.begin(); it != table.end(); ++it) {
      entries[it.key()] = it.value().get<std::vector<double>>();
    }
    q.tables.push_back(std::move(entries));
  }
  return q;
}

}  // namespace fairgne
