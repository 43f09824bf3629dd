#include "dpbandit/harness.hpp"

#include <cmath>

#include "dpbandit/parallel.hpp"

namespace dpbandit::harness {

void ExperimentConfig::validate() const {
  env.validate();
  if (env.reward_law != RewardLaw::Bernoulli) {
    throw ConfigError("simulations require a Bernoulli environment");
  }
  agent.validate();
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (agent.kind == AgentKind::TSPrivacy && agent.horizon != horizon) {
    throw ConfigError("privacy agent horizon must equal the experiment horizon");
  }
}

std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run_id) {
  return mix_seed(base_seed, run_id);
}

RunRecord run_once(const ExperimentConfig& config, std::uint64_t run_id) {
  config.validate();
  const std::size_t t_max = static_cast<std::size_t>(config.horizon);
  const double best = config.env.best_mean();

  RunRecord rec;
  rec.run_id = run_id;
  rec.actions.reserve(t_max);
  rec.rewards.reserve(t_max);
  rec.cum_regret.reserve(t_max);

  RandomStream rng(run_seed(config.base_seed, run_id));
  AgentState state(config.env.arms());
  double regret = 0.0;
  for (std::size_t t = 0; t < t_max; ++t) {
    const auto [action, reward] = step(config.env, state, config.agent, rng);
    regret += best - config.env.arm_means[action];
    rec.actions.push_back(static_cast<std::uint32_t>(action));
    rec.rewards.push_back(reward);
    rec.cum_regret.push_back(regret);
  }
  return rec;
}

SummaryStats summarize(const ExperimentConfig& config, const std::vector<RunRecord>& records) {
  SummaryStats s;
  const std::size_t k = config.env.arms();
  s.per_arm_pulls_mean.assign(k, 0.0);
  if (records.empty()) return s;

  const double n = static_cast<double>(records.size());
  double total = 0.0;
  std::vector<std::uint64_t> pulls(k, 0);
  for (const auto& r : records) {
    total += r.final_regret();
    for (auto a : r.actions) pulls[a] += 1;
  }
  s.mean_final_regret = total / n;

  if (records.size() > 1) {
    double ss = 0.0;
    for (const auto& r : records) {
      const double d = r.final_regret() - s.mean_final_regret;
      ss += d * d;
    }
    s.std_final_regret = std::sqrt(ss / (n - 1.0));
  }
  s.ci95_halfwidth = 1.96 * s.std_final_regret / std::sqrt(n);
  for (std::size_t i = 0; i < k; ++i) s.per_arm_pulls_mean[i] = static_cast<double>(pulls[i]) / n;
  return s;
}

ExperimentResult run_many(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  ExperimentResult out;
  out.config = config;
  out.records.resize(static_cast<std::size_t>(config.runs));
  parallel_for(out.records.size(), workers == 0 ? worker_count() : workers,
               [&](std::size_t i) { out.records[i] = run_once(config, i); });
  out.summary = summarize(config, out.records);
  return out;
}

double regret_bound_privacy(std::uint64_t horizon, std::size_t arms, double epsilon) {
  if (horizon < 2) throw DomainError("regret bound needs T >= 2");
  if (arms < 2) throw DomainError("regret bound needs K >= 2");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  const double t = static_cast<double>(horizon);
  const double k = static_cast<double>(arms);
  const double log_t = std::log(t);
  return log_t * log_t / epsilon + std::sqrt(k * t * std::log(k));
}

double mean_suboptimal_pulls(const ExperimentResult& result) {
  if (result.records.empty()) return 0.0;
  const auto& means = result.config.env.arm_means;
  const double best = result.config.env.best_mean();
  std::uint64_t count = 0;
  for (const auto& r : result.records) {
    for (auto a : r.actions) count += means[a] < best ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(result.records.size());
}

double suboptimal_pull_inflation(const ExperimentResult& standard, const ExperimentResult& privacy) {
  if (standard.config.env.arm_means != privacy.config.env.arm_means ||
      standard.config.horizon != privacy.config.horizon) {
    throw ConfigError("inflation requires the same environment and horizon");
  }
  return mean_suboptimal_pulls(privacy) - mean_suboptimal_pulls(standard);
}

}  // namespace dpbandit::harness
