#include "fairgne/dual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairgne {

double shaped_reward(double r, const DualState& dual, double fairness_value) {
  double g = dual.tau.value - fairness_value;
  if (dual.clamp_slack) g = std::max(0.0, g);
  return r - dual.lambda * g;
}

DualState dual_update(DualState dual, double g_estimate) {
  if (!std::isfinite(g_estimate)) {
    throw std::runtime_error("non-finite constraint estimate in dual update");
  }
  dual.lambda = std::clamp(dual.lambda + dual.eta_lambda * g_estimate, 0.0,
                           dual.lambda_max);
  if (dual.updates % std::max(1, dual.history_stride) == 0) {
    dual.history.push_back({dual.updates, dual.lambda, g_estimate});
  }
  ++dual.updates;
  return dual;
}

KKTRecord kkt_check(double lambda, double g_estimate, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  KKTRecord rec;
  rec.lambda = lambda;
  rec.g = g_estimate;
  rec.residual = std::abs(lambda * g_estimate);
  rec.feasible = g_estimate <= 0.0;
  rec.epsilon = epsilon;
  rec.satisfied = rec.feasible && rec.residual <= epsilon * (1.0 + lambda);
  return rec;
}

KKTRecord kkt_check(const DualState& dual, double g_estimate, double epsilon) {
  return kkt_check(dual.lambda, g_estimate, epsilon);
}

}  // namespace fairgne
