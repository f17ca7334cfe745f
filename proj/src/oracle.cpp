#include "fairgne/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fairgne {

std::int64_t FiniteGame::num_profiles() const {
  std::int64_t total = 1;
  for (int c : policy_counts) total *= c;
  return total;
}

int FiniteGame::profile_index(std::span<const int> policy) const {
  if (static_cast<int>(policy.size()) != n) {
    throw std::invalid_argument("profile arity does not match agent count");
  }
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    if (policy[i] < 0 || policy[i] >= policy_counts[i]) {
      throw std::invalid_argument("policy index out of range");
    }
    idx = idx * policy_counts[i] + policy[i];
  }
  return idx;
}

std::vector<int> FiniteGame::profile_policy(int index) const {
  std::vector<int> policy(n);
  for (int i = n - 1; i >= 0; --i) {
    policy[i] = index % policy_counts[i];
    index /= policy_counts[i];
  }
  return policy;
}

double FiniteGame::jfi(int profile) const { return jfi_values[profile]; }

double FiniteGame::g(int profile) const { return g_values[profile]; }

std::string FiniteGame::profile_label(int profile) const {
  std::vector<int> policy = profile_policy(profile);
  std::string label = "(";
  for (int i = 0; i < n; ++i) {
    if (i > 0) label += ",";
    if (i < static_cast<int>(policy_names.size()) &&
        policy[i] < static_cast<int>(policy_names[i].size())) {
      label += policy_names[i][policy[i]];
    } else {
      label += std::to_string(policy[i]);
    }
  }
  label += ")";
  return label;
}

void FiniteGame::rebuild_constraint_cache() {
  std::int64_t profiles = num_profiles();
  jfi_values.resize(profiles);
  g_values.resize(profiles);
  for (std::int64_t p = 0; p < profiles; ++p) {
    jfi_values[p] = jain_index(std::span<const double>(workloads[p]));
    g_values[p] = tau.value - jfi_values[p];
  }
}

FiniteGame make_table_game(std::string name, std::vector<int> policy_counts,
                           std::vector<double> returns,
                           std::vector<std::vector<double>> workloads,
                           FairnessThreshold tau,
                           std::vector<std::vector<std::string>> policy_names,
                           std::int64_t cap) {
  FiniteGame game;
  game.name = std::move(name);
  game.n = static_cast<int>(policy_counts.size());
  if (game.n < 1) throw std::invalid_argument("game needs at least one agent");
  for (int c : policy_counts) {
    if (c < 1) throw std::invalid_argument("each agent needs >= 1 policy");
  }
  game.policy_counts = std::move(policy_counts);
  std::int64_t profiles = game.num_profiles();
  if (profiles > cap) {
    throw std::length_error("profile enumeration exceeds the cap");
  }
  if (static_cast<std::int64_t>(returns.size()) != profiles ||
      static_cast<std::int64_t>(workloads.size()) != profiles) {
    throw std::invalid_argument("table size does not match the profile count");
  }
  game.returns = std::move(returns);
  game.workloads = std::move(workloads);
  game.policy_names = std::move(policy_names);
  game.tau = tau;
  game.rebuild_constraint_cache();
  return game;
}

FiniteGame game_from_env(const Env& prototype,
                         const std::vector<std::vector<int>>& policy_actions,
                         FairnessThreshold tau, ReturnMode mode, double gamma,
                         std::int64_t cap) {
  int n = prototype.num_agents();
  if (static_cast<int>(policy_actions.size()) != n) {
    throw std::invalid_argument("need one policy list per agent");
  }
  FiniteGame game;
  game.name = "env";
  game.n = n;
  game.tau = tau;
  for (const auto& actions : policy_actions) {
    if (actions.empty()) {
      throw std::invalid_argument("each agent needs >= 1 policy");
    }
    game.policy_counts.push_back(static_cast<int>(actions.size()));
  }
  std::int64_t profiles = game.num_profiles();
  if (profiles > cap) {
    throw std::length_error("profile enumeration exceeds the cap");
  }
  game.returns.resize(profiles);
  game.workloads.resize(profiles);
  for (std::int64_t p = 0; p < profiles; ++p) {
    std::vector<int> policy = game.profile_policy(static_cast<int>(p));
    std::vector<int> joint(n);
    for (int i = 0; i < n; ++i) joint[i] = policy_actions[i][policy[i]];
    auto env = prototype.clone();
    env->reset(0);
    double total = 0.0;
    double discount = 1.0;
    int steps = 0;
    while (!env->done()) {
      EnvStepResult res = env->step(joint);
      total +=
          (mode == ReturnMode::Discounted ? discount : 1.0) * res.team_reward;
      discount *= gamma;
      ++steps;
    }
    if (mode == ReturnMode::LongRunAverage && steps > 0) {
      total /= static_cast<double>(steps);
    }
    game.returns[p] = total;
    const auto& w = env->workload();
    game.workloads[p].assign(w.begin(), w.end());
  }
  game.rebuild_constraint_cache();
  return game;
}

FiniteGame chore_game(double tau) {
  // Profiles in index order: (work,work), (work,rest), (rest,work), (rest,rest).
  return make_table_game(
      "chore", {2, 2}, {0.8, 0.9, 0.9, 0.0},
      {{1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}, FairnessThreshold(tau),
      {{"work", "rest"}, {"work", "rest"}});
}

std::vector<ProfileRow> enumerate_profiles(const FiniteGame& game,
                                           std::int64_t cap) {
  std::int64_t profiles = game.num_profiles();
  if (profiles > cap) {
    throw std::length_error("profile enumeration exceeds the cap");
  }
  std::vector<ProfileRow> rows;
  rows.reserve(static_cast<std::size_t>(profiles));
  for (std::int64_t p = 0; p < profiles; ++p) {
    ProfileRow row;
    row.index = static_cast<int>(p);
    row.policy = game.profile_policy(row.index);
    row.ret = game.returns[p];
    row.workload = game.workloads[p];
    row.jfi = game.jfi(row.index);
    row.g = game.g(row.index);
    rows.push_back(std::move(row));
  }
  return rows;
}

int exact_primal(const FiniteGame& game, double lambda) {
  std::int64_t profiles = game.num_profiles();
  int best = 0;
  double best_value = game.returns[0] - lambda * game.g_values[0];
  for (std::int64_t p = 1; p < profiles; ++p) {
    double value = game.returns[p] - lambda * game.g_values[p];
    if (value > best_value) {
      best_value = value;
      best = static_cast<int>(p);
    }
  }
  return best;
}

double dual_function(const FiniteGame& game, double lambda) {
  int p = exact_primal(game, lambda);
  return game.returns[p] - lambda * game.g_values[p];
}

namespace {

// Looks for a sustained oscillation: the recent window visits a small set
// of profiles mixing feasible and infeasible members while lambda stays in
// a band. Returns the kink lambda and the feasible crossing profile, chosen
// so the feasible member sits on the dual envelope at the kink.
struct CycleKink {
  double lambda;
  int feasible_profile;
};

std::optional<CycleKink> detect_cycle(const FiniteGame& game,
                                      const std::vector<AscentIterate>& log,
                                      int window, double eta) {
  if (static_cast<int>(log.size()) < window) return std::nullopt;
  std::set<int> distinct;
  double lo = log.back().lambda, hi = log.back().lambda;
  double max_abs_g = 0.0;
  for (int j = 0; j < window; ++j) {
    const auto& it = log[log.size() - 1 - j];
    distinct.insert(it.profile);
    lo = std::min(lo, it.lambda);
    hi = std::max(hi, it.lambda);
    max_abs_g = std::max(max_abs_g, std::abs(it.g));
  }
  if (distinct.size() < 2 || distinct.size() > 4) return std::nullopt;
  if (hi - lo > 2.0 * eta * max_abs_g + 1e-12) return std::nullopt;
  bool any_feasible = false, any_infeasible = false;
  for (int p : distinct) {
    (game.g(p) > 0.0 ? any_infeasible : any_feasible) = true;
  }
  if (!any_feasible || !any_infeasible) return std::nullopt;

  double mid = 0.5 * (lo + hi);
  std::optional<CycleKink> best;
  double best_dist = 0.0;
  for (int a : distinct) {
    if (game.g(a) <= 0.0) continue;  // a: infeasible side
    for (int b : distinct) {
      if (game.g(b) > 0.0) continue;  // b: feasible side
      double denom = game.g(a) - game.g(b);
      if (std::abs(denom) < 1e-15) continue;
      double kink = (game.returns[a] - game.returns[b]) / denom;
      if (kink < 0.0) continue;
      if (kink < lo - 10.0 * eta || kink > hi + 10.0 * eta) continue;
      double value_b = game.returns[b] - kink * game.g(b);
      if (value_b + 1e-9 < dual_function(game, kink)) continue;
      double dist = std::abs(kink - mid);
      if (!best || dist < best_dist) {
        best = CycleKink{kink, b};
        best_dist = dist;
      }
    }
  }
  return best;
}

}  // namespace

AscentResult exact_dual_ascent(const FiniteGame& game,
                               const AscentOptions& options) {
  if (!(options.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  AscentResult res;
  double lambda = std::clamp(options.lambda0, 0.0, options.lambda_max);
  int best_feasible = -1;
  const int cycle_window = 30;
  const double stall_tol = 1e-6;
  int cap_streak = 0;
  int last_profile = -1;

  for (int iter = 0; iter < options.max_iter; ++iter) {
    int profile = exact_primal(game, lambda);
    double g_value = game.g(profile);
    if (g_value <= 0.0 &&
        (best_feasible < 0 ||
         game.returns[profile] > game.returns[best_feasible])) {
      best_feasible = profile;
    }
    res.log.push_back({iter, lambda, profile, g_value,
                       game.returns[profile] - lambda * g_value});
    last_profile = profile;

    // Stationarity: feasible argmax with lambda flat over 10 iterates.
    if (g_value <= 0.0 && static_cast<int>(res.log.size()) >= 11) {
      double lo = lambda, hi = lambda;
      for (std::size_t j = res.log.size() - 11; j < res.log.size(); ++j) {
        lo = std::min(lo, res.log[j].lambda);
        hi = std::max(hi, res.log[j].lambda);
      }
      if (hi - lo < stall_tol) {
        res.status = AscentStatus::ConvergedStationary;
        break;
      }
    }

    if (auto kink = detect_cycle(game, res.log, cycle_window, options.eta)) {
      res.switching_lambda = kink->lambda;
      lambda = std::clamp(kink->lambda, 0.0, options.lambda_max);
      if (best_feasible < 0 || game.returns[kink->feasible_profile] >=
                                   game.returns[best_feasible]) {
        best_feasible = kink->feasible_profile;
      }
      res.status = AscentStatus::ConvergedCycle;
      break;
    }

    // Lambda pinned at the cap by an infeasible argmax: nothing improves.
    if (lambda >= options.lambda_max && g_value > 0.0) {
      if (++cap_streak >= 10) {
        res.status = best_feasible < 0 ? AscentStatus::Infeasible
                                       : AscentStatus::MaxIterations;
        break;
      }
    } else {
      cap_streak = 0;
    }

    lambda =
        std::clamp(lambda + options.eta * g_value, 0.0, options.lambda_max);
  }

  // Prefer the final feasible argmax on return ties so the certificate
  // profile sits on the dual envelope at lambda_star.
  if (last_profile >= 0 && game.g(last_profile) <= 0.0 &&
      (best_feasible < 0 ||
       game.returns[last_profile] >= game.returns[best_feasible])) {
    best_feasible = last_profile;
  }

  res.feasible_found = best_feasible >= 0;
  if (!res.feasible_found) {
    res.status = AscentStatus::Infeasible;
    res.certificate.pi_star = -1;
    res.certificate.lambda_star = lambda;
    return res;
  }

  auto& cert = res.certificate;
  cert.pi_star = best_feasible;
  cert.lambda_star = lambda;
  cert.g_value = game.g(best_feasible);
  cert.kkt = kkt_check(cert.lambda_star, cert.g_value, options.kkt_epsilon);
  if (options.check_deviations) {
    cert.deviation_checked = verify_smgne(game, best_feasible).is_equilibrium;
  }
  return res;
}

SmgneResult verify_smgne(const FiniteGame& game, int profile,
                         double tolerance) {
  if (profile < 0 || profile >= game.num_profiles()) {
    throw std::invalid_argument("profile index out of range");
  }
  SmgneResult res;
  if (game.g(profile) > 0.0) {
    res.status = SmgneStatus::InfeasibleProfile;
    return res;
  }
  std::vector<int> policy = game.profile_policy(profile);
  double base_return = game.returns[profile];
  for (int agent = 0; agent < game.n; ++agent) {
    std::vector<int> deviation = policy;
    for (int alt = 0; alt < game.policy_counts[agent]; ++alt) {
      if (alt == policy[agent]) continue;
      deviation[agent] = alt;
      int dev_index = game.profile_index(deviation);
      if (game.g(dev_index) > 0.0) continue;  // infeasible deviations don't count
      if (game.returns[dev_index] > base_return + tolerance) {
        res.status = SmgneStatus::ImprovingDeviation;
        res.witness =
            DeviationWitness{agent, deviation, game.returns[dev_index]};
        return res;
      }
    }
  }
  res.is_equilibrium = true;
  res.status = SmgneStatus::Equilibrium;
  return res;
}

}  // namespace fairgne
