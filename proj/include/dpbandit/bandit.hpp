#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpbandit/errors.hpp"
#include "dpbandit/random.hpp"

namespace dpbandit {

enum class RewardLaw {
  Bernoulli,
  // Rewards come from a predetermined tape owned by the audit module.
  DegenerateTape,
};

struct BanditInstance {
  std::vector<double> arm_means;
  RewardLaw reward_law = RewardLaw::Bernoulli;

  std::size_t arms() const noexcept { return arm_means.size(); }
  double best_mean() const;

  // Throws ConfigError unless K >= 1 and every mean lies in [0, 1].
  void validate() const;
};

/// Per-arm sufficient statistics of the Gaussian posterior.
///
/// The posterior mean divides by pulls + 1, so an unpulled arm is centred at
/// 0 and a single reward of 1 moves the mean to 1/2.
struct ArmPosterior {
  std::uint64_t pulls = 0;
  double reward_sum = 0.0;

  double mean() const noexcept { return reward_sum / static_cast<double>(pulls + 1); }

  friend bool operator==(const ArmPosterior&, const ArmPosterior&) = default;
};

enum class AgentKind { TSStandard, TSPrivacy, UCB1 };

std::string to_string(AgentKind kind);

struct AgentSpec {
  AgentKind kind = AgentKind::TSStandard;
  // TS-Privacy only.
  double epsilon_target = 0.0;
  std::uint64_t horizon = 0;

  static AgentSpec ts_standard() { return {AgentKind::TSStandard, 0.0, 0}; }
  static AgentSpec ts_privacy(double epsilon, std::uint64_t horizon) {
    return {AgentKind::TSPrivacy, epsilon, horizon};
  }
  static AgentSpec ucb1() { return {AgentKind::UCB1, 0.0, 0}; }

  bool is_thompson() const noexcept { return kind != AgentKind::UCB1; }

  /// Multiplier c on the standard posterior variance 1/(k+1).
  /// 1 for TS-Standard, (ln T)^2 / epsilon for TS-Privacy. Evaluated as a single
  /// quotient so that epsilon == (ln T)^2 yields exactly 1.0.
  double variance_scale() const;

  // Throws ConfigError for TS-Privacy with epsilon <= 0 or horizon < 2.
  void validate() const;
};

struct AgentState {
  std::vector<ArmPosterior> posteriors;
  std::uint64_t round = 0;

  explicit AgentState(std::size_t arms) : posteriors(arms) {}
  AgentState(std::vector<ArmPosterior> posts, std::uint64_t t)
      : posteriors(std::move(posts)), round(t) {}

  std::size_t arms() const noexcept { return posteriors.size(); }
};

/// Adds one observed reward. Throws DomainError unless 0 <= reward <= 1.
ArmPosterior posterior_update(ArmPosterior post, double reward);

/// 1/(k+1) for TS-Standard, (ln T)^2 / (epsilon (k+1)) for TS-Privacy.
double posterior_variance(const ArmPosterior& post, const AgentSpec& spec);

/// One posterior sample theta ~ Normal(mean, posterior_variance). One normal draw.
double sample_posterior(const ArmPosterior& post, const AgentSpec& spec, RandomStream& rng);

/// Thompson sampling: one fresh sample for every arm (in index order, K normal
/// draws, unpulled arms included), argmax with ties to the lowest index.
std::size_t select_action(const AgentState& state, const AgentSpec& spec, RandomStream& rng);

/// UCB1 with the conventional mean reward_sum/pulls. Rounds t < K pull arm t;
/// afterwards argmax of mean + sqrt(2 ln t / pulls). Consumes no draws.
std::size_t ucb1_select(const AgentState& state, RandomStream& rng);

/// Dispatches on spec.kind.
std::size_t choose_arm(const AgentState& state, const AgentSpec& spec, RandomStream& rng);

/// Bernoulli reward for `arm`, one uniform draw. reward = 1 iff u < mean.
double draw_reward(const BanditInstance& env, std::size_t arm, RandomStream& rng);

struct StepResult {
  std::size_t action;
  double reward;
};

/// Records `reward` for `action` and advances the round counter.
void observe(AgentState& state, std::size_t action, double reward);

/// One interaction round: choose, draw a reward from env (one uniform), update
/// that arm only, advance the round. Throws ConfigError for tape environments
/// and for TS-Privacy past its horizon.
StepResult step(const BanditInstance& env, AgentState& state, const AgentSpec& spec,
                RandomStream& rng);

}  // namespace dpbandit
