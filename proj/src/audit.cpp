#include "dpbandit/audit.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>

#include "dpbandit/parallel.hpp"

namespace dpbandit::audit {

RewardTape::RewardTape(std::size_t rounds, std::size_t arms, std::vector<double> values)
    : rounds_(rounds), arms_(arms), values_(std::move(values)) {
  if (rounds_ == 0 || arms_ == 0) throw ConfigError("reward tape needs T >= 1 and K >= 1");
  if (values_.size() != rounds_ * arms_) throw ConfigError("reward tape size is not T x K");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("tape rewards must lie in [0, 1]");
  }
}

void RewardTape::set(std::size_t round, std::size_t arm, double reward) {
  if (!(reward >= 0.0 && reward <= 1.0)) throw ConfigError("tape rewards must lie in [0, 1]");
  values_.at(round * arms_ + arm) = reward;
}

void NeighborPair::validate() const {
  if (round >= base.rounds() || arm >= base.arms()) {
    throw ConfigError("neighbor entry lies outside the tape");
  }
  if (!(alt_reward >= 0.0 && alt_reward <= 1.0)) {
    throw ConfigError("alternative reward must lie in [0, 1]");
  }
  if (alt_reward == base.at(round, arm)) {
    throw ConfigError("alternative reward equals the base entry; tapes are not neighbors");
  }
}

RewardTape NeighborPair::neighbor() const {
  validate();
  RewardTape alt = base;
  alt.set(round, arm, alt_reward);
  return alt;
}

std::vector<std::size_t> OutcomeHistogram::decode(std::size_t code) const {
  std::vector<std::size_t> seq(rounds);
  for (std::size_t t = rounds; t-- > 0;) {
    seq[t] = code % arms;
    code /= arms;
  }
  return seq;
}

std::uint64_t outcome_space(std::size_t arms, std::size_t rounds) {
  if (arms == 0) throw ConfigError("audit needs K >= 1");
  std::uint64_t n = 1;
  for (std::size_t t = 0; t < rounds; ++t) {
    if (n > kMaxOutcomes / arms) throw ConfigError("K^T exceeds the exhaustive histogram limit");
    n *= arms;
  }
  if (n > kMaxOutcomes) throw ConfigError("K^T exceeds the exhaustive histogram limit");
  return n;
}

namespace {

std::size_t play_tape(const AgentSpec& agent, const RewardTape& tape, RandomStream& rng) {
  AgentState state(tape.arms());
  std::size_t code = 0;
  for (std::size_t t = 0; t < tape.rounds(); ++t) {
    const std::size_t action = choose_arm(state, agent, rng);
    observe(state, action, tape.at(t, action));
    code = code * tape.arms() + action;
  }
  return code;
}

}  // namespace

OutcomeHistogram run_on_tape(const AgentSpec& agent, const RewardTape& tape, std::uint64_t trials,
                             std::uint64_t seed, std::size_t workers) {
  agent.validate();
  if (agent.kind == AgentKind::TSPrivacy && agent.horizon != tape.rounds()) {
    throw ConfigError("privacy agent horizon must equal the tape length");
  }
  OutcomeHistogram hist;
  hist.arms = tape.arms();
  hist.rounds = tape.rounds();
  hist.counts.assign(static_cast<std::size_t>(outcome_space(hist.arms, hist.rounds)), 0);
  hist.trials = trials;
  if (trials == 0) return hist;

  constexpr std::uint64_t kChunk = 1 << 14;
  const std::size_t chunks = static_cast<std::size_t>((trials + kChunk - 1) / kChunk);
  std::vector<std::vector<std::uint64_t>> partial(chunks);
  parallel_for(chunks, workers == 0 ? worker_count() : workers, [&](std::size_t c) {
    auto& local = partial[c];
    local.assign(hist.counts.size(), 0);
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(trials, begin + kChunk);
    for (std::uint64_t j = begin; j < end; ++j) {
      RandomStream rng(mix_seed(seed, j));
      local[play_tape(agent, tape, rng)] += 1;
    }
  });
  for (const auto& local : partial) {
    for (std::size_t o = 0; o < local.size(); ++o) hist.counts[o] += local[o];
  }
  return hist;
}

Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double alpha) {
  if (trials == 0) throw EstimationError("interval of an empty sample");
  if (successes > trials) throw EstimationError("more successes than trials");
  const double x = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  Interval iv{0.0, 1.0};
  if (successes > 0) iv.lower = boost::math::ibeta_inv(x, n - x + 1.0, 0.5 * alpha);
  if (successes < trials) iv.upper = boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - 0.5 * alpha);
  return iv;
}

EpsilonEstimate estimate_epsilon(const OutcomeHistogram& a, const OutcomeHistogram& b,
                                 double delta) {
  if (a.arms != b.arms || a.rounds != b.rounds || a.counts.size() != b.counts.size()) {
    throw EstimationError("histograms cover different outcome spaces");
  }
  if (a.trials == 0 || b.trials == 0) throw EstimationError("degenerate (empty) histogram");
  if (a.trials != b.trials) throw EstimationError("histograms have different trial counts");
  if (!(delta >= 0.0)) throw EstimationError("delta must be nonnegative");

  const std::size_t n = a.counts.size();
  const double alpha = (1.0 - kFamilyConfidence) / static_cast<double>(n);
  std::vector<Interval> ia(n), ib(n);
  for (std::size_t o = 0; o < n; ++o) {
    ia[o] = clopper_pearson(a.counts[o], a.trials, alpha);
    ib[o] = clopper_pearson(b.counts[o], b.trials, alpha);
  }

  EpsilonEstimate est;
  double best = -std::numeric_limits<double>::infinity();
  double best_upper = -std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<Interval>& num, const std::vector<Interval>& den,
                  const OutcomeHistogram& hn, const OutcomeHistogram& hd) {
    for (std::size_t o = 0; o < n; ++o) {
      const double lo_num = num[o].lower - delta;
      if (lo_num > 0.0) {
        const double v = std::log(lo_num / den[o].upper);
        if (v > best) {
          best = v;
          if (v > 0.0) {
            est.argmax_outcome = o;
            est.argmax_count_num = hn.counts[o];
            est.argmax_count_den = hd.counts[o];
          }
        }
      }
      const double hi_num = num[o].upper - delta;
      if (hi_num > 0.0 && den[o].lower > 0.0) {
        best_upper = std::max(best_upper, std::log(hi_num / den[o].lower));
      }
    }
  };
  scan(ia, ib, a, b);
  scan(ib, ia, b, a);
  est.eps_hat = std::max(best, 0.0);
  est.ci_upper = std::max(best_upper, 0.0);
  return est;
}

std::vector<std::uint64_t> pair_trajectory(const NeighborPair& pair) {
  pair.validate();
  const std::size_t remaining = pair.base.rounds() - pair.round;
  return accountant::default_trajectory(remaining);
}

accountant::RunAccount analytical_budget(const AgentSpec& agent, const NeighborPair& pair) {
  agent.validate();
  const auto horizon = static_cast<std::uint64_t>(pair.base.rounds());
  const auto alloc = accountant::default_allocation(horizon);
  const auto counts = pair_trajectory(pair);
  if (agent.kind == AgentKind::TSPrivacy) {
    return accountant::account_run_detailed(counts, alloc.delta_step, alloc.slack,
                                            accountant::StepRule::ExactRoot,
                                            agent.variance_scale());
  }
  if (agent.kind == AgentKind::UCB1) {
    throw ConfigError("UCB1 is deterministic given rewards and has no finite privacy budget");
  }
  return accountant::account_run_detailed(counts, alloc.delta_step, alloc.slack);
}

AuditReport audit_algorithm(const AgentSpec& agent, const NeighborPair& pair, std::uint64_t trials,
                            std::uint64_t seed, const accountant::RunAccount& analytical,
                            std::size_t workers) {
  pair.validate();
  if (pair.base.rounds() < 2) throw ConfigError("audit needs T >= 2");
  if (trials == 0) throw ConfigError("audit needs at least one trial");
  AuditReport report;
  report.analytical = analytical;
  const double t = static_cast<double>(pair.base.rounds());
  report.delta = std::pow(t, -4.0);
  report.hist_base = run_on_tape(agent, pair.base, trials, seed, workers);
  report.hist_neighbor = run_on_tape(agent, pair.neighbor(), trials, seed, workers);
  report.estimate = estimate_epsilon(report.hist_base, report.hist_neighbor, report.delta);
  report.pass = report.estimate.eps_hat <= analytical.budget.epsilon;
  report.low_power =
      !report.estimate.argmax_outcome || report.estimate.argmax_count_num < kMinArgmaxCount;
  return report;
}

AuditReport audit_algorithm(const AgentSpec& agent, const NeighborPair& pair, std::uint64_t trials,
                            std::uint64_t seed, std::size_t workers) {
  pair.validate();
  return audit_algorithm(agent, pair, trials, seed, analytical_budget(agent, pair), workers);
}

}  // namespace dpbandit::audit
