#include "dpbandit/accountant.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>

namespace dpbandit::accountant {

namespace {

// ln(1/(2 delta)); 2*delta is exact in binary floating point.
double log_inv_two_delta(double delta) { return -std::log(2.0 * delta); }

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
}

}  // namespace

void GaussianMechParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw DomainError("sensitivity must be positive");
  }
  check_delta(delta);
}

std::string to_string(Branch branch) {
  switch (branch) {
    case Branch::Basic:
      return "Basic";
    case Branch::AdvancedA:
      return "AdvancedA";
    case Branch::AdvancedB:
      return "AdvancedB";
  }
  return "unknown";
}

double sensitivity(std::uint64_t pulls) { return 1.0 / static_cast<double>(pulls + 1); }

bool gaussian_mech_check(const GaussianMechParams& params, double epsilon) {
  params.validate();
  if (!(epsilon > 0.0)) return false;
  if (std::isinf(epsilon)) return true;
  const double log_term = log_inv_two_delta(params.delta);
  const double required =
      (params.sensitivity / epsilon) * std::sqrt(2.0 * log_term + 2.0 * epsilon);
  constexpr double kRelSlack = 16.0 * DBL_EPSILON;
  return params.sigma >= required * (1.0 - kRelSlack);
}

double gaussian_mech_eps_min(double sigma, double sensitivity, double delta) {
  GaussianMechParams{sigma, sensitivity, delta}.validate();
  const double s = sigma / sensitivity;
  const double s2 = s * s;
  const double log_term = log_inv_two_delta(delta);
  return (1.0 + std::sqrt(1.0 + 2.0 * s2 * log_term)) / s2;
}

double eps_step_paper(std::uint64_t pulls, double delta) {
  check_delta(delta);
  const double n = static_cast<double>(pulls + 1);
  return 1.0 / std::sqrt(n) + std::sqrt((1.0 + 2.0 * log_inv_two_delta(delta)) / n);
}

PrivacyBudget compose(const CompositionInput& input) {
  if (!(input.slack >= 0.0 && input.slack < 1.0)) {
    throw DomainError("composition slack must lie in [0, 1)");
  }
  double sum_eps = 0.0;
  double sum_hetero = 0.0;  // sum eps_i (e^eps_i - 1)/(e^eps_i + 1)
  double sum_sq = 0.0;
  // ln((1 - slack) prod (1 - delta_i)) as a compensated extended-precision sum:
  // with the default allocation the margin below T^-4 is a few ulps.
  long double log_keep = std::log1p(-static_cast<long double>(input.slack));
  long double log_keep_err = 0.0L;
  for (const auto& s : input.steps) {
    if (!(s.epsilon > 0.0) || !std::isfinite(s.epsilon)) {
      throw DomainError("step epsilon must be positive and finite");
    }
    if (!(s.delta >= 0.0 && s.delta < 0.5)) throw DomainError("step delta must lie in [0, 1/2)");
    sum_eps += s.epsilon;
    sum_hetero += s.epsilon * std::tanh(0.5 * s.epsilon);
    sum_sq += s.epsilon * s.epsilon;
    const long double term = std::log1p(-static_cast<long double>(s.delta));
    const long double next = log_keep + term;
    log_keep_err += std::fabs(log_keep) >= std::fabs(term) ? (log_keep - next) + term
                                                           : (term - next) + log_keep;
    log_keep = next;
  }

  PrivacyBudget out;
  out.delta = static_cast<double>(-std::expm1(log_keep + log_keep_err));
  out.epsilon = sum_eps;
  out.branch = Branch::Basic;
  if (input.steps.empty() || input.slack <= 0.0) return out;

  const double adv_a =
      sum_hetero +
      std::sqrt(2.0 * sum_sq * std::log(std::numbers::e + std::sqrt(sum_sq) / input.slack));
  const double adv_b = sum_hetero + std::sqrt(2.0 * sum_sq * -std::log(input.slack));
  if (adv_a < out.epsilon) {
    out.epsilon = adv_a;
    out.branch = Branch::AdvancedA;
  }
  if (adv_b < out.epsilon) {
    out.epsilon = adv_b;
    out.branch = Branch::AdvancedB;
  }
  return out;
}

RunAccount account_run_detailed(std::span<const std::uint64_t> counts, double delta_step,
                                double slack, StepRule rule, double variance_scale) {
  if (counts.empty()) throw DomainError("trajectory must be nonempty");
  check_delta(delta_step);
  if (rule == StepRule::ClosedForm && variance_scale != 1.0) {
    throw ConfigError("the closed form applies only to the standard posterior variance");
  }
  if (!(variance_scale > 0.0) || !std::isfinite(variance_scale)) {
    throw DomainError("variance scale must be positive");
  }

  RunAccount out;
  CompositionInput input;
  input.slack = slack;
  input.steps.reserve(counts.size());
  out.per_step.reserve(counts.size());
  for (std::uint64_t k : counts) {
    double eps = 0.0;
    if (rule == StepRule::ClosedForm) {
      eps = eps_step_paper(k, delta_step);
    } else {
      const double n = static_cast<double>(k + 1);
      eps = gaussian_mech_eps_min(std::sqrt(variance_scale / n), sensitivity(k), delta_step);
    }
    input.steps.push_back({eps, delta_step});
    out.per_step.push_back({k, eps, delta_step});
  }
  out.budget = compose(input);
  return out;
}

PrivacyBudget account_run(std::span<const std::uint64_t> counts, double delta_step, double slack,
                          StepRule rule, double variance_scale) {
  return account_run_detailed(counts, delta_step, slack, rule, variance_scale).budget;
}

std::vector<std::uint64_t> default_trajectory(std::uint64_t horizon) {
  std::vector<std::uint64_t> counts(horizon);
  for (std::uint64_t t = 0; t < horizon; ++t) counts[t] = t;
  return counts;
}

DeltaAllocation default_allocation(std::uint64_t horizon) {
  if (horizon < 2) throw DomainError("horizon must be at least 2");
  const double t = static_cast<double>(horizon);
  // Shaved by a few ulps so the composed total stays <= T^-4 after rounding.
  constexpr double kShave = 1.0 - 4.0 * DBL_EPSILON;
  return {0.5 * std::pow(t, -5.0) * kShave, 0.5 * std::pow(t, -4.0) * kShave};
}

PrivacyBudget theorem1_budget(std::uint64_t horizon) {
  if (horizon < 2) throw DomainError("horizon must be at least 2");
  const double t = static_cast<double>(horizon);
  const double log_t = std::log(t);
  return {log_t * log_t, std::pow(t, -4.0), Branch::Basic};
}

}  // namespace dpbandit::accountant
