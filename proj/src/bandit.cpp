#include "dpbandit/bandit.hpp"

#include <algorithm>
#include <cmath>

namespace dpbandit {

double BanditInstance::best_mean() const {
  validate();
  return *std::max_element(arm_means.begin(), arm_means.end());
}

void BanditInstance::validate() const {
  if (arm_means.empty()) throw ConfigError("bandit instance needs at least one arm");
  for (double m : arm_means) {
    if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("arm means must lie in [0, 1]");
  }
}

std::string to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::TSStandard:
      return "ts";
    case AgentKind::TSPrivacy:
      return "ts-dp";
    case AgentKind::UCB1:
      return "ucb1";
  }
  return "unknown";
}

void AgentSpec::validate() const {
  if (kind != AgentKind::TSPrivacy) return;
  if (!(epsilon_target > 0.0) || !std::isfinite(epsilon_target)) {
    throw ConfigError("TS-Privacy requires a finite epsilon_target > 0");
  }
  if (horizon < 2) throw ConfigError("TS-Privacy requires horizon >= 2");
}

double AgentSpec::variance_scale() const {
  if (kind != AgentKind::TSPrivacy) return 1.0;
  validate();
  const double log_t = std::log(static_cast<double>(horizon));
  return (log_t * log_t) / epsilon_target;
}

ArmPosterior posterior_update(ArmPosterior post, double reward) {
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw DomainError("reward must lie in [0, 1]");
  }
  post.pulls += 1;
  post.reward_sum += reward;
  return post;
}

double posterior_variance(const ArmPosterior& post, const AgentSpec& spec) {
  if (!spec.is_thompson()) throw ConfigError("posterior variance is defined for Thompson agents");
  return spec.variance_scale() / static_cast<double>(post.pulls + 1);
}

namespace {

double sample_with_scale(const ArmPosterior& post, double scale, RandomStream& rng) {
  const double sd = std::sqrt(scale / static_cast<double>(post.pulls + 1));
  return post.mean() + sd * rng.normal();
}

}  // namespace

double sample_posterior(const ArmPosterior& post, const AgentSpec& spec, RandomStream& rng) {
  if (!spec.is_thompson()) throw ConfigError("posterior sampling is defined for Thompson agents");
  return sample_with_scale(post, spec.variance_scale(), rng);
}

std::size_t select_action(const AgentState& state, const AgentSpec& spec, RandomStream& rng) {
  if (!spec.is_thompson()) throw ConfigError("select_action requires a Thompson agent");
  const double scale = spec.variance_scale();
  std::size_t best = 0;
  double best_theta = -INFINITY;
  for (std::size_t i = 0; i < state.arms(); ++i) {
    const double theta = sample_with_scale(state.posteriors[i], scale, rng);
    if (i == 0 || theta > best_theta) {
      best = i;
      best_theta = theta;
    }
  }
  return best;
}

std::size_t ucb1_select(const AgentState& state, RandomStream& /*rng*/) {
  const std::size_t k = state.arms();
  if (state.round < k) return static_cast<std::size_t>(state.round);
  const double log_t = std::log(static_cast<double>(state.round));
  std::size_t best = 0;
  double best_index = -INFINITY;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& p = state.posteriors[i];
    // Only reachable with hand-built states; an unpulled arm is always explored.
    if (p.pulls == 0) return i;
    const double n = static_cast<double>(p.pulls);
    const double index = p.reward_sum / n + std::sqrt(2.0 * log_t / n);
    if (i == 0 || index > best_index) {
      best = i;
      best_index = index;
    }
  }
  return best;
}

std::size_t choose_arm(const AgentState& state, const AgentSpec& spec, RandomStream& rng) {
  return spec.kind == AgentKind::UCB1 ? ucb1_select(state, rng) : select_action(state, spec, rng);
}

double draw_reward(const BanditInstance& env, std::size_t arm, RandomStream& rng) {
  if (env.reward_law != RewardLaw::Bernoulli) {
    throw ConfigError("tape environments receive rewards from the audit module");
  }
  return rng.uniform() < env.arm_means.at(arm) ? 1.0 : 0.0;
}

void observe(AgentState& state, std::size_t action, double reward) {
  auto& post = state.posteriors.at(action);
  post = posterior_update(post, reward);
  state.round += 1;
}

StepResult step(const BanditInstance& env, AgentState& state, const AgentSpec& spec,
                RandomStream& rng) {
  if (spec.kind == AgentKind::TSPrivacy && state.round >= spec.horizon) {
    throw ConfigError("TS-Privacy agent stepped past its horizon");
  }
  if (env.arms() != state.arms()) throw ConfigError("environment and agent disagree on K");
  const std::size_t action = choose_arm(state, spec, rng);
  const double reward = draw_reward(env, action, rng);
  observe(state, action, reward);
  return {action, reward};
}

}  // namespace dpbandit
