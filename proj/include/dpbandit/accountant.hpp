#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpbandit/errors.hpp"

// Privacy accounting for Gaussian-posterior Thompson sampling.
//
// Every posterior sample is treated as a Gaussian mechanism releasing the
// posterior mean with sensitivity w = 1/(k+1) under a one-reward change. The
// per-sample budgets are combined with the heterogeneous advanced composition
// bound (Kairouz, Oh, Viswanath 2017, Theorem 3.5):
//
//   eps_g = min{ sum eps_i,
//                sum eps_i tanh(eps_i/2) + sqrt(2 sum eps_i^2 ln(e + sqrt(sum eps_i^2)/slack)),
//                sum eps_i tanh(eps_i/2) + sqrt(2 sum eps_i^2 ln(1/slack)) }
//   delta_total = 1 - (1 - slack) prod (1 - delta_i)
//
// (eps (e^eps - 1)/(e^eps + 1) is evaluated as eps tanh(eps/2).)
namespace dpbandit::accountant {

struct GaussianMechParams {
  double sigma;
  double sensitivity;
  double delta;

  // Throws DomainError unless sigma > 0, sensitivity > 0 and 0 < delta < 1/2.
  void validate() const;
};

struct StepPrivacy {
  double epsilon;
  double delta;
};

struct CompositionInput {
  std::vector<StepPrivacy> steps;
  double slack = 0.0;
};

enum class Branch { Basic, AdvancedA, AdvancedB };

std::string to_string(Branch branch);

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  Branch branch = Branch::Basic;
};

/// w = 1/(k+1): the largest change of reward_sum/(k+1) when one reward in [0,1] changes.
double sensitivity(std::uint64_t pulls);

/// sigma >= (w/eps) sqrt(2 ln(1/(2 delta)) + 2 eps), with sensitivity in the numerator.
///
/// The comparison admits a relative slack of 16 machine epsilons on the right
/// side so that the exact root of the condition (which is attained with
/// equality) is not rejected by rounding.
bool gaussian_mech_check(const GaussianMechParams& params, double epsilon);

/// Smallest eps passing gaussian_mech_check: the positive root of
/// s^2 eps^2 - 2 eps - 2L = 0 with s = sigma/w, L = ln(1/(2 delta)).
double gaussian_mech_eps_min(double sigma, double sensitivity, double delta);

/// Closed form for one posterior sample after k pulls:
///   1/sqrt(k+1) + sqrt((1 + 2 ln(1/(2 delta))) / (k+1)).
/// Exact root at k = 0, an upper bound on the root for k >= 1.
double eps_step_paper(std::uint64_t pulls, double delta);

PrivacyBudget compose(const CompositionInput& input);

/// How a pull count maps to a per-sample epsilon.
enum class StepRule {
  // eps_step_paper; only valid for the standard posterior variance.
  ClosedForm,
  // gaussian_mech_eps_min with sigma^2 = variance_scale/(k+1), w = 1/(k+1).
  ExactRoot,
};

struct StepAccount {
  std::uint64_t count;
  double epsilon;
  double delta;
};

struct RunAccount {
  PrivacyBudget budget;
  std::vector<StepAccount> per_step;
};

/// Composes one Gaussian release per entry of `counts`.
RunAccount account_run_detailed(std::span<const std::uint64_t> counts, double delta_step,
                                double slack, StepRule rule = StepRule::ClosedForm,
                                double variance_scale = 1.0);

PrivacyBudget account_run(std::span<const std::uint64_t> counts, double delta_step, double slack,
                          StepRule rule = StepRule::ClosedForm, double variance_scale = 1.0);

/// Counts 0, 1, ..., T-1: the affected arm pulled in every round.
std::vector<std::uint64_t> default_trajectory(std::uint64_t horizon);

/// Default split of the total delta = T^-4: T^-5/2 per step and T^-4/2
/// composition slack, each lowered by 4 machine epsilons (relative) so that
/// 1 - (1 - slack)(1 - delta_step)^T <= T^-4 survives floating-point rounding.
struct DeltaAllocation {
  double delta_step;
  double slack;
};
DeltaAllocation default_allocation(std::uint64_t horizon);

/// ((ln T)^2, T^-4, Basic). Throws DomainError for T < 2.
PrivacyBudget theorem1_budget(std::uint64_t horizon);

}  // namespace dpbandit::accountant
