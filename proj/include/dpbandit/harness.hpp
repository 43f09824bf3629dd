#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dpbandit/bandit.hpp"

namespace dpbandit::harness {

struct ExperimentConfig {
  BanditInstance env;
  AgentSpec agent;
  std::uint64_t horizon = 1;
  std::uint64_t runs = 1;
  std::uint64_t base_seed = 0;

  // Throws ConfigError on horizon/runs of 0, a tape environment, or a
  // TS-Privacy agent whose horizon differs from the experiment horizon.
  void validate() const;
};

struct RunRecord {
  std::uint64_t run_id = 0;
  std::vector<std::uint32_t> actions;
  std::vector<double> rewards;
  // cum_regret[t] = sum over rounds <= t of (best mean - mean of chosen arm).
  std::vector<double> cum_regret;

  double final_regret() const { return cum_regret.empty() ? 0.0 : cum_regret.back(); }

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct SummaryStats {
  double mean_final_regret = 0.0;
  double std_final_regret = 0.0;  // sample standard deviation, 0 for a single run
  double ci95_halfwidth = 0.0;    // 1.96 * std / sqrt(runs)
  std::vector<double> per_arm_pulls_mean;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> records;  // ordered by run_id
  SummaryStats summary;
};

/// Seed of run `run_id`: mix_seed(base_seed, run_id).
std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run_id);

RunRecord run_once(const ExperimentConfig& config, std::uint64_t run_id);

/// Aggregates in run_id order; independent of how the records were produced.
SummaryStats summarize(const ExperimentConfig& config, const std::vector<RunRecord>& records);

/// Runs 0..runs-1 on `workers` threads (0 = worker_count()).
ExperimentResult run_many(const ExperimentConfig& config, std::size_t workers = 0);

/// (ln T)^2/epsilon + sqrt(K T ln K). Throws DomainError for K < 2 or T < 2.
double regret_bound_privacy(std::uint64_t horizon, std::size_t arms, double epsilon);

/// Mean number of rounds per run spent on arms whose mean is below the best.
double mean_suboptimal_pulls(const ExperimentResult& result);

/// Mean suboptimal pulls of `privacy` minus those of `standard`. Throws
/// ConfigError unless both results share arm means and horizon.
double suboptimal_pull_inflation(const ExperimentResult& standard, const ExperimentResult& privacy);

}  // namespace dpbandit::harness
