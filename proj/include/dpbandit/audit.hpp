#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dpbandit/accountant.hpp"
#include "dpbandit/bandit.hpp"

namespace dpbandit::audit {

/// Histograms are exhaustive over all K^T action sequences, capped here.
inline constexpr std::uint64_t kMaxOutcomes = 4096;

/// Confidence level shared by all per-outcome intervals of one estimate
/// (Bonferroni-split across the K^T outcomes).
inline constexpr double kFamilyConfidence = 0.99;

/// Low-power flag threshold on the counts behind the maximising outcome.
inline constexpr std::uint64_t kMinArgmaxCount = 100;

/// T x K matrix: the reward the agent receives if it pulls arm i at round t.
class RewardTape {
 public:
  RewardTape(std::size_t rounds, std::size_t arms, std::vector<double> values);

  std::size_t rounds() const noexcept { return rounds_; }
  std::size_t arms() const noexcept { return arms_; }
  double at(std::size_t round, std::size_t arm) const { return values_.at(round * arms_ + arm); }
  void set(std::size_t round, std::size_t arm, double reward);

  friend bool operator==(const RewardTape&, const RewardTape&) = default;

 private:
  std::size_t rounds_;
  std::size_t arms_;
  std::vector<double> values_;
};

struct NeighborPair {
  RewardTape base;
  std::size_t round;
  std::size_t arm;
  double alt_reward;

  // Throws ConfigError unless (round, arm) is in range, alt_reward is in
  // [0, 1], and alt_reward differs from the base entry.
  void validate() const;
  RewardTape neighbor() const;
};

/// Outcome counts indexed by the base-K code of the action sequence
/// (action at round 0 is the most significant digit).
struct OutcomeHistogram {
  std::size_t arms = 0;
  std::size_t rounds = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t trials = 0;

  std::size_t outcomes() const noexcept { return counts.size(); }
  std::vector<std::size_t> decode(std::size_t code) const;

  friend bool operator==(const OutcomeHistogram&, const OutcomeHistogram&) = default;
};

/// K^T, or ConfigError when it exceeds kMaxOutcomes.
std::uint64_t outcome_space(std::size_t arms, std::size_t rounds);

/// Runs `trials` independent episodes of length T; trial j uses stream
/// mix_seed(seed, j). Rewards come from the tape, so only the agent consumes draws.
OutcomeHistogram run_on_tape(const AgentSpec& agent, const RewardTape& tape, std::uint64_t trials,
                             std::uint64_t seed, std::size_t workers = 0);

struct Interval {
  double lower;
  double upper;
};

/// Two-sided Clopper-Pearson interval for `successes` of `trials` at level 1 - alpha.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double alpha);

struct EpsilonEstimate {
  double eps_hat = 0.0;   // conservative lower bound, clamped at 0
  double ci_upper = 0.0;  // anti-conservative companion, clamped at 0
  // Outcome attaining eps_hat and the counts behind it, set only when eps_hat > 0.
  std::optional<std::size_t> argmax_outcome;
  std::uint64_t argmax_count_num = 0;
  std::uint64_t argmax_count_den = 0;
};

/// Symmetrised audit estimator over all outcomes o:
///   eps_hat  = max ln((lower_A(o) - delta) / upper_B(o))
///   ci_upper = max ln((upper_A(o) - delta) / lower_B(o))
/// over o with positive numerator (and positive denominator for ci_upper), in
/// both directions A->B and B->A. Intervals are Clopper-Pearson at per-outcome
/// level 1 - (1 - kFamilyConfidence)/K^T.
EpsilonEstimate estimate_epsilon(const OutcomeHistogram& a, const OutcomeHistogram& b, double delta);

/// Counts 0, 1, ..., T-1-r for a change at round r: the affected arm starting
/// unpulled and pulled in every remaining round.
std::vector<std::uint64_t> pair_trajectory(const NeighborPair& pair);

/// Analytical budget matching the pair: closed-form steps for TS-Standard,
/// exact roots at the inflated variance for TS-Privacy, with the default delta
/// allocation for horizon T.
accountant::RunAccount analytical_budget(const AgentSpec& agent, const NeighborPair& pair);

struct AuditReport {
  EpsilonEstimate estimate;
  double delta = 0.0;  // T^-4 slack granted to the estimator
  accountant::RunAccount analytical;
  bool pass = false;
  bool low_power = false;
  OutcomeHistogram hist_base;
  OutcomeHistogram hist_neighbor;
};

/// Runs both tapes with the same seed and compares eps_hat (at delta = T^-4)
/// against the analytical composed epsilon. T must be at least 2. The report
/// flags low power when eps_hat is 0 or the maximising outcome was seen fewer
/// than kMinArgmaxCount times on its numerator side.
AuditReport audit_algorithm(const AgentSpec& agent, const NeighborPair& pair, std::uint64_t trials,
                            std::uint64_t seed, const accountant::RunAccount& analytical,
                            std::size_t workers = 0);

/// As above with analytical_budget(agent, pair).
AuditReport audit_algorithm(const AgentSpec& agent, const NeighborPair& pair, std::uint64_t trials,
                            std::uint64_t seed, std::size_t workers = 0);

}  // namespace dpbandit::audit
