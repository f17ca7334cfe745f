#include "fairgne/fairness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fairgne {

FairnessThreshold::FairnessThreshold(double tau) : value(tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw std::invalid_argument("fairness threshold must lie in (0,1), got " +
                                std::to_string(tau));
  }
}

namespace {

void check_workload(std::span<const double> w) {
  if (w.empty()) throw std::domain_error("empty workload vector");
  for (double x : w) {
    if (!(x >= 0.0)) throw std::domain_error("negative workload entry");
  }
}

}  // namespace

double jain_index(std::span<const double> w) {
  check_workload(w);
  double sum = 0.0, sum_sq = 0.0;
  for (double x : w) {
    sum += x;
    sum_sq += x * x;
  }
  if (sum == 0.0) return 1.0;
  return (sum * sum) / (static_cast<double>(w.size()) * sum_sq);
}

double jain_index(std::span<const int> w) {
  std::vector<double> v(w.begin(), w.end());
  return jain_index(std::span<const double>(v));
}

double statewise_violation(std::span<const double> w, FairnessThreshold tau) {
  return tau.value - jain_index(w);
}

double statewise_violation(std::span<const int> w, FairnessThreshold tau) {
  return tau.value - jain_index(w);
}

double gini_index(std::span<const double> w) {
  check_workload(w);
  double sum = 0.0;
  for (double x : w) sum += x;
  if (sum == 0.0) return 0.0;
  double abs_diff = 0.0;
  for (double a : w) {
    for (double b : w) abs_diff += std::abs(a - b);
  }
  return abs_diff / (2.0 * static_cast<double>(w.size()) * sum);
}

double gini_index(std::span<const int> w) {
  std::vector<double> v(w.begin(), w.end());
  return gini_index(std::span<const double>(v));
}

double discounted_violation(std::span<const double> per_step_fairness,
                            FairnessThreshold tau, double gamma) {
  if (per_step_fairness.empty()) throw std::domain_error("empty fairness series");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::domain_error("gamma must lie in (0,1)");
  }
  double total = 0.0;
  double discount = 1.0;
  for (double f : per_step_fairness) {
    total += discount * (tau.value - f);
    discount *= gamma;
  }
  return total;
}

ViolationRecord make_violation_record(std::span<const double> per_step_fairness,
                                      FairnessThreshold tau, double gamma) {
  ViolationRecord rec;
  rec.gamma = gamma;
  rec.per_step_g.reserve(per_step_fairness.size());
  for (double f : per_step_fairness) rec.per_step_g.push_back(tau.value - f);
  rec.discounted_total = discounted_violation(per_step_fairness, tau, gamma);
  return rec;
}

}  // namespace fairgne
