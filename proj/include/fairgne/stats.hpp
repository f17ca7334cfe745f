#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fairgne/dual.hpp"
#include "fairgne/trace.hpp"

namespace fairgne {

struct SampleStats {
  double mean = 0.0;
  double var = 0.0;  // unbiased (n-1 denominator); 0 for n < 2
  int n = 0;
  double stddev() const;
};

SampleStats sample_stats(std::span<const double> xs);

// Evaluation metrics over a batch of greedy rollouts.
struct EvalSummary {
  double success_rate = 0.0;
  double mean_jfi = 0.0;      // terminal-workload JFI
  double std_jfi = 0.0;
  double mean_step_jfi = 0.0;  // per-step average, logged alongside
  double mean_lambda = 0.0;
  double std_lambda = 0.0;
  double constraint_sat_rate = 0.0;  // fraction with F(w_T) >= tau
  double kkt_sat_rate = 0.0;         // per-episode KKT check at epsilon
  double mean_return = 0.0;
  int n_episodes = 0;
  int n_seeds = 1;
};

// Aggregates greedy evaluation traces. KKT satisfaction uses each episode's
// discounted violation and the lambda recorded on its trace.
EvalSummary summarize(std::span<const EpisodeTrace> traces,
                      FairnessThreshold tau, double epsilon_kkt, double gamma);

struct TestResult {
  double t_statistic = 0.0;
  double degrees_freedom = 0.0;
  double p_value = 1.0;
  double cohens_d = 0.0;
  bool significant_bonferroni = false;
  double alpha_adjusted = 0.0;
};

// Welch's unequal-variance t-test, two-sided p via the regularized
// incomplete beta function. Requires |a|,|b| >= 2.
// Conventions: both variances zero and equal means -> t=0, p=1;
// both variances zero and unequal means -> t=+-inf, p=0.
TestResult welch_ttest(std::span<const double> a, std::span<const double> b);

// (mean a - mean b) / pooled sd, pooled with (n_a-1, n_b-1) weights.
// Zero pooled sd with distinct means returns a signed infinity sentinel.
double cohens_d(std::span<const double> a, std::span<const double> b);

// flag_i = (p_i <= alpha / m). Requires m >= |p_values| >= 1 and p in [0,1].
std::vector<bool> bonferroni(std::span<const double> p_values, double alpha,
                             int m);

// Two-sided tail probability of Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

// I_x(a, b) by Lentz's continued fraction (Numerical Recipes betacf scheme).
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace fairgne
