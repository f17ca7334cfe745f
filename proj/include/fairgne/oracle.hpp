#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairgne/dual.hpp"
#include "fairgne/env.hpp"
#include "fairgne/fairness.hpp"

namespace fairgne {

// Enumerable game over deterministic stationary policy profiles. Profiles
// are indexed mixed-radix with agent 0 most significant.
struct FiniteGame {
  std::string name;
  int n = 0;
  std::vector<int> policy_counts;
  std::vector<std::vector<std::string>> policy_names;  // optional labels
  std::vector<double> returns;                 // R(pi) per profile index
  std::vector<std::vector<double>> workloads;  // w(pi) per profile index
  FairnessThreshold tau{0.9};
  // Cached per-profile JFI and g = tau - JFI, filled at construction.
  std::vector<double> jfi_values;
  std::vector<double> g_values;

  std::int64_t num_profiles() const;
  int profile_index(std::span<const int> policy) const;
  std::vector<int> profile_policy(int index) const;
  double jfi(int profile) const;
  double g(int profile) const;
  std::string profile_label(int profile) const;
  void rebuild_constraint_cache();
};

inline constexpr std::int64_t kDefaultEnumerationCap = 1'000'000;

// Table-backed game; validates shapes and the enumeration cap.
FiniteGame make_table_game(std::string name, std::vector<int> policy_counts,
                           std::vector<double> returns,
                           std::vector<std::vector<double>> workloads,
                           FairnessThreshold tau,
                           std::vector<std::vector<std::string>> policy_names = {},
                           std::int64_t cap = kDefaultEnumerationCap);

// Evaluates every profile of constant-action policies on a deterministic
// environment. Average mode divides the return by the episode length;
// otherwise returns are discounted by gamma.
enum class ReturnMode { LongRunAverage, Discounted };
FiniteGame game_from_env(const Env& prototype,
                         const std::vector<std::vector<int>>& policy_actions,
                         FairnessThreshold tau, ReturnMode mode,
                         double gamma = 0.99,
                         std::int64_t cap = kDefaultEnumerationCap);

// Two-agent work/rest game: one worker suffices for the task (0.9), both
// working duplicates the effort cost (0.8), nobody working earns nothing.
// Default tau 0.9 makes the lone-worker optimum infeasible.
FiniteGame chore_game(double tau = 0.9);

struct ProfileRow {
  int index;
  std::vector<int> policy;
  double ret;
  std::vector<double> workload;
  double jfi;
  double g;
};

// Exhaustive table of (profile, R, w, JFI, g). Throws std::length_error
// past the cap.
std::vector<ProfileRow> enumerate_profiles(
    const FiniteGame& game, std::int64_t cap = kDefaultEnumerationCap);

// argmax_pi R(pi) - lambda * g(pi), ties to the lowest profile index.
int exact_primal(const FiniteGame& game, double lambda);

// d(lambda) = max_pi R(pi) - lambda g(pi); convex piecewise linear.
double dual_function(const FiniteGame& game, double lambda);

struct AscentIterate {
  int iter;
  double lambda;
  int profile;
  double g;
  double penalized;
};

enum class AscentStatus {
  ConvergedStationary,  // feasible argmax, lambda settled
  ConvergedCycle,       // two-profile oscillation around a switching kink
  MaxIterations,
  Infeasible,  // lambda saturated with no feasible profile in the game
};

struct SaddleCertificate {
  int pi_star = -1;  // -1 when no feasible profile exists
  double lambda_star = 0.0;
  double g_value = 0.0;
  KKTRecord kkt{};
  bool deviation_checked = false;  // verify_smgne certified pi_star
};

struct AscentResult {
  SaddleCertificate certificate;
  AscentStatus status = AscentStatus::MaxIterations;
  bool feasible_found = false;
  // Exact kink computed from the cycle profiles, when a cycle was detected.
  std::optional<double> switching_lambda;
  std::vector<AscentIterate> log;
};

struct AscentOptions {
  double eta = 0.01;
  int max_iter = 20000;
  double lambda0 = 0.0;
  double lambda_max = 1000.0;
  double kkt_epsilon = 0.05;
  bool check_deviations = true;
};

// Projected dual ascent lambda <- [lambda + eta g(pi_lambda)]_+ with exact
// primal maximization each iterate. Tracks the best feasible profile seen.
AscentResult exact_dual_ascent(const FiniteGame& game,
                               const AscentOptions& options = {});

enum class SmgneStatus { Equilibrium, InfeasibleProfile, ImprovingDeviation };

struct DeviationWitness {
  int agent;
  std::vector<int> deviation_policy;
  double deviation_return;
};

struct SmgneResult {
  bool is_equilibrium = false;
  SmgneStatus status = SmgneStatus::ImprovingDeviation;
  std::optional<DeviationWitness> witness;
};

// A profile passes when no agent has a feasible unilateral deviation whose
// return exceeds the profile's by more than tolerance. An infeasible
// profile fails vacuously with status InfeasibleProfile.
SmgneResult verify_smgne(const FiniteGame& game, int profile,
                         double tolerance = 0.0);

}  // namespace fairgne
