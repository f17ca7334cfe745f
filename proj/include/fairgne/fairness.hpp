#pragma once

#include <span>
#include <vector>

namespace fairgne {

// Fairness threshold tau for the constraint g = tau - F(w) <= 0. Must lie in (0,1).
struct FairnessThreshold {
  double value;
  explicit FairnessThreshold(double tau);
};

// Jain's index (sum w)^2 / (n sum w^2). Lies in [1/n, 1] for nonzero w;
// 1 iff all entries equal, 1/n iff exactly one entry is nonzero.
// The all-zero vector maps to 1.0 (no work, no inequity).
double jain_index(std::span<const double> w);
double jain_index(std::span<const int> w);

// Statewise constraint value g = tau - F(w). g <= 0 means the constraint holds.
double statewise_violation(std::span<const double> w, FairnessThreshold tau);
double statewise_violation(std::span<const int> w, FairnessThreshold tau);

// Mean-absolute-difference Gini: sum_i sum_j |w_i - w_j| / (2 n sum_i w_i).
// 0 iff all entries equal; the all-zero vector maps to 0.0.
double gini_index(std::span<const double> w);
double gini_index(std::span<const int> w);

// Per-step violation series g_t = tau - F_t and its discounted total.
struct ViolationRecord {
  std::vector<double> per_step_g;
  double gamma;
  double discounted_total;
};

// sum_t gamma^t (tau - F_t) over a per-step fairness series, 0 < gamma < 1.
double discounted_violation(std::span<const double> per_step_fairness,
                            FairnessThreshold tau, double gamma);

ViolationRecord make_violation_record(std::span<const double> per_step_fairness,
                                      FairnessThreshold tau, double gamma);

}  // namespace fairgne
