#include "fairgne/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairgne {

double SampleStats::stddev() const { return std::sqrt(var); }

SampleStats sample_stats(std::span<const double> xs) {
  SampleStats s;
  s.n = static_cast<int>(xs.size());
  if (s.n == 0) return s;
  for (double x : xs) s.mean += x;
  s.mean /= s.n;
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.var = ss / (s.n - 1);
  return s;
}

EvalSummary summarize(std::span<const EpisodeTrace> traces,
                      FairnessThreshold tau, double epsilon_kkt, double gamma) {
  if (traces.empty()) throw std::domain_error("summarize: no traces");
  EvalSummary out;
  out.n_episodes = static_cast<int>(traces.size());
  std::vector<double> jfis, lambdas;
  int successes = 0, constraint_ok = 0, kkt_ok = 0;
  double step_jfi_total = 0.0;
  double return_total = 0.0;
  for (const auto& tr : traces) {
    if (tr.success) ++successes;
    double terminal_jfi = jain_index(std::span<const int>(tr.final_workload));
    jfis.push_back(terminal_jfi);
    lambdas.push_back(tr.lambda);
    if (terminal_jfi >= tau.value) ++constraint_ok;
    double g_bar = discounted_violation(tr, tau, gamma);
    if (kkt_check(tr.lambda, g_bar, epsilon_kkt).satisfied) ++kkt_ok;
    double mean_step = 0.0;
    for (const auto& s : tr.steps) mean_step += s.jfi;
    step_jfi_total += mean_step / static_cast<double>(tr.steps.size());
    return_total += total_reward(tr);
  }
  auto jfi_stats = sample_stats(jfis);
  auto lam_stats = sample_stats(lambdas);
  out.success_rate = static_cast<double>(successes) / out.n_episodes;
  out.mean_jfi = jfi_stats.mean;
  out.std_jfi = jfi_stats.stddev();
  out.mean_step_jfi = step_jfi_total / out.n_episodes;
  out.mean_lambda = lam_stats.mean;
  out.std_lambda = lam_stats.stddev();
  out.constraint_sat_rate = static_cast<double>(constraint_ok) / out.n_episodes;
  out.kkt_sat_rate = static_cast<double>(kkt_ok) / out.n_episodes;
  out.mean_return = return_total / out.n_episodes;
  return out;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("ibeta: a,b must be > 0");
  if (x < 0.0 || x > 1.0) throw std::domain_error("ibeta: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  // Continued fraction for I_x(a,b), modified Lentz.
  auto betacf = [](double a, double b, double x) {
    const int max_iter = 300;
    const double eps = 3e-16;
    const double fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
      int m2 = 2 * m;
      double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
      d = 1.0 + aa * d;
      if (std::abs(d) < fpmin) d = fpmin;
      c = 1.0 + aa / c;
      if (std::abs(c) < fpmin) c = fpmin;
      d = 1.0 / d;
      h *= d * c;
      aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
      d = 1.0 + aa * d;
      if (std::abs(d) < fpmin) d = fpmin;
      c = 1.0 + aa / c;
      if (std::abs(c) < fpmin) c = fpmin;
      d = 1.0 / d;
      double del = d * c;
      h *= del;
      if (std::abs(del - 1.0) < eps) break;
    }
    return h;
  };

  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  // Use the symmetry transform for faster convergence.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw std::domain_error("t-distribution: df must be > 0");
  if (std::isinf(t)) return 0.0;
  double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

TestResult welch_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::domain_error("welch_ttest: need at least 2 samples per group");
  }
  auto sa = sample_stats(a);
  auto sb = sample_stats(b);
  TestResult res;
  res.cohens_d = cohens_d(a, b);
  if (sa.var == 0.0 && sb.var == 0.0) {
    if (sa.mean == sb.mean) {
      res.t_statistic = 0.0;
      res.degrees_freedom = static_cast<double>(sa.n + sb.n - 2);
      res.p_value = 1.0;
    } else {
      res.t_statistic = sa.mean > sb.mean
                            ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
      res.degrees_freedom = static_cast<double>(sa.n + sb.n - 2);
      res.p_value = 0.0;
    }
    return res;
  }
  double va_n = sa.var / sa.n;
  double vb_n = sb.var / sb.n;
  res.t_statistic = (sa.mean - sb.mean) / std::sqrt(va_n + vb_n);
  double num = (va_n + vb_n) * (va_n + vb_n);
  double den = va_n * va_n / (sa.n - 1) + vb_n * vb_n / (sb.n - 1);
  res.degrees_freedom = num / den;
  res.p_value = student_t_two_sided_p(res.t_statistic, res.degrees_freedom);
  return res;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::domain_error("cohens_d: need at least 2 samples per group");
  }
  auto sa = sample_stats(a);
  auto sb = sample_stats(b);
  double pooled_var =
      ((sa.n - 1) * sa.var + (sb.n - 1) * sb.var) / (sa.n + sb.n - 2);
  double diff = sa.mean - sb.mean;
  if (pooled_var == 0.0) {
    if (diff == 0.0) return 0.0;
    return diff > 0.0 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
  }
  return diff / std::sqrt(pooled_var);
}

std::vector<bool> bonferroni(std::span<const double> p_values, double alpha,
                             int m) {
  if (p_values.empty()) throw std::domain_error("bonferroni: empty p list");
  if (m < static_cast<int>(p_values.size())) {
    throw std::domain_error("bonferroni: m smaller than number of tests");
  }
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error("bonferroni: p-value outside [0,1]");
    }
  }
  double threshold = alpha / m;
  std::vector<bool> flags;
  flags.reserve(p_values.size());
  for (double p : p_values) flags.push_back(p <= threshold);
  return flags;
}

}  // namespace fairgne
