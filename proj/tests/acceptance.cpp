// End-to-end acceptance checks. One PASS/FAIL line per criterion; exit status
// is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dpbandit/accountant.hpp"
#include "dpbandit/audit.hpp"
#include "dpbandit/cli.hpp"
#include "dpbandit/harness.hpp"
#include "dpbandit/io.hpp"

using namespace dpbandit;
namespace fs = std::filesystem;

namespace {

const std::vector<double> kFiveArms{0.9, 0.8, 0.7, 0.6, 0.5};

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;
  std::function<Outcome()> check;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

harness::ExperimentConfig five_arm_config(AgentSpec agent, std::uint64_t horizon,
                                          std::uint64_t runs, std::uint64_t seed) {
  harness::ExperimentConfig cfg;
  cfg.env.arm_means = kFiveArms;
  cfg.agent = agent;
  cfg.horizon = horizon;
  cfg.runs = runs;
  cfg.base_seed = seed;
  return cfg;
}

std::string runs_csv(const harness::ExperimentResult& r) {
  std::ostringstream os;
  io::write_runs_csv(os, r.records);
  return os.str();
}

int quiet_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

std::vector<std::string> json_keys(const io::Json& doc) {
  std::vector<std::string> k;
  for (const auto& [key, _] : doc.items()) k.push_back(key);
  return k;
}

Outcome identity() {
  const std::uint64_t horizon = 1000;
  const double log_t = std::log(static_cast<double>(horizon));
  const auto ts = harness::run_many(five_arm_config(AgentSpec::ts_standard(), horizon, 20, 2024));
  const auto dp = harness::run_many(
      five_arm_config(AgentSpec::ts_privacy(log_t * log_t, horizon), horizon, 20, 2024));
  const auto a = runs_csv(ts), b = runs_csv(dp);
  return {a == b, "runs.csv " + std::to_string(a.size()) + " bytes, identical=" +
                      (a == b ? "yes" : "no")};
}

Outcome closed_form_validity() {
  using namespace accountant;
  std::uint64_t failures = 0;
  for (double delta : {1e-4, 1e-8}) {
    for (std::uint64_t k = 0; k <= 100000; ++k) {
      const double n = static_cast<double>(k + 1);
      const GaussianMechParams p{1.0 / std::sqrt(n), 1.0 / n, delta};
      if (!gaussian_mech_check(p, eps_step_paper(k, delta))) ++failures;
    }
  }
  const double root = gaussian_mech_eps_min(2.0, 1.0, 0.5 / std::numbers::e);
  const bool root_ok = std::abs(root - 1.0) <= 1e-12;
  return {failures == 0 && root_ok, "check failures=" + std::to_string(failures) +
                                        ", eps_min(2,1,1/(2e))-1=" + fmt(root - 1.0, 3)};
}

Outcome composition_scaling() {
  using namespace accountant;
  bool increasing = true, delta_ok = true;
  double prev = 0.0, lo = INFINITY, hi = 0.0;
  std::ostringstream detail;
  for (int p = 8; p <= 14; ++p) {
    const std::uint64_t t = 1ULL << p;
    const auto alloc = default_allocation(t);
    const auto b = account_run(default_trajectory(t), alloc.delta_step, alloc.slack);
    const double log_t = std::log(static_cast<double>(t));
    const double ratio = b.epsilon / (log_t * log_t);
    increasing &= b.epsilon > prev;
    delta_ok &= b.delta <= std::pow(static_cast<double>(t), -4.0);
    prev = b.epsilon;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    detail << "T=2^" << p << " eps=" << fmt(b.epsilon) << " ";
  }
  const double band = hi / lo;
  detail << "ratio band [" << fmt(lo, 4) << ", " << fmt(hi, 4) << "] width " << fmt(band, 4);
  return {increasing && delta_ok && band <= 4.0, detail.str()};
}

Outcome regret() {
  const std::uint64_t horizon = 10000, runs = 200, seed = 77;
  const double log_t = std::log(static_cast<double>(horizon));
  const double k = static_cast<double>(kFiveArms.size());
  const double sqrt_term = std::sqrt(k * static_cast<double>(horizon) * std::log(k));

  const auto standard = harness::run_many(five_arm_config(AgentSpec::ts_standard(), horizon, runs, seed));
  const bool a = standard.summary.mean_final_regret <= 2.0 * sqrt_term;

  // (b) no adjacent step towards smaller epsilon lowers mean regret significantly
  // (one-sided z-test at the 0.01 level).
  const std::vector<double> grid{log_t * log_t, 4.0, 1.0, 0.25};
  std::vector<harness::ExperimentResult> by_eps;
  for (double eps : grid) {
    by_eps.push_back(harness::run_many(
        five_arm_config(AgentSpec::ts_privacy(eps, horizon), horizon, runs, seed)));
  }
  constexpr double kZ99 = 2.3263478740408408;
  bool b = true;
  std::ostringstream means;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& s = by_eps[i].summary;
    means << "eps=" << fmt(grid[i], 4) << ":" << fmt(s.mean_final_regret, 5) << " ";
    if (i == 0) continue;
    const auto& prev = by_eps[i - 1].summary;
    const double se = std::sqrt((prev.std_final_regret * prev.std_final_regret +
                                 s.std_final_regret * s.std_final_regret) /
                                static_cast<double>(runs));
    const double z = (prev.mean_final_regret - s.mean_final_regret) / se;
    b &= z <= kZ99;
  }

  const double inflation = harness::suboptimal_pull_inflation(standard, by_eps[2]);
  const double cap = 20.0 * log_t * log_t / 1.0;
  const bool c = inflation > 0.0 && inflation <= cap;

  std::ostringstream detail;
  detail << "(a) " << (a ? "ok" : "FAIL") << " TS regret " << fmt(standard.summary.mean_final_regret)
         << " <= " << fmt(2.0 * sqrt_term) << "; (b) " << (b ? "ok" : "FAIL") << " " << means.str()
         << "; (c) " << (c ? "ok" : "FAIL") << " inflation at eps=1 " << fmt(inflation)
         << " vs cap 20(lnT)^2/eps=" << fmt(cap) << " (ratio to (lnT)^2/eps "
         << fmt(inflation / (log_t * log_t), 4) << ")";
  return {a && b && c, detail.str()};
}

Outcome empirical_privacy(const fs::path& scratch) {
  const auto tape_path = scratch / "tape.csv";
  std::ofstream(tape_path) << "t,arm0,arm1\n0,0,0\n1,0,0\n2,0,0\n3,0,0\n";
  const std::uint64_t trials = 1000000, seed = 5;
  const auto out = scratch / "audit";
  const int code = quiet_cli({"audit", "--tape", tape_path.string(), "--diff-round", "0",
                              "--diff-arm", "0", "--alt-reward", "1", "--trials",
                              std::to_string(trials), "--agent", "ts", "--seed",
                              std::to_string(seed), "--out", out.string()});
  bool pass_flag = false;
  double eps_hat_std = NAN, eps_analytical = NAN;
  if (fs::exists(out / "audit.json")) {
    const auto doc = io::Json::parse(slurp(out / "audit.json"));
    pass_flag = doc["pass"].get<bool>();
    eps_hat_std = doc["eps_hat"].get<double>();
    eps_analytical = doc["eps_analytical"].get<double>();
  }

  std::ifstream in(tape_path);
  const audit::NeighborPair pair{io::read_tape_csv(in), 0, 0, 1.0};
  const auto priv = audit::audit_algorithm(AgentSpec::ts_privacy(0.1, 4), pair, trials, seed);
  const bool directional = priv.estimate.eps_hat <= eps_hat_std;
  const bool ok = code == 0 && pass_flag && eps_hat_std <= eps_analytical && directional;
  return {ok, "exit=" + std::to_string(code) + " eps_hat(ts)=" + fmt(eps_hat_std) +
                  " <= eps_analytical=" + fmt(eps_analytical) +
                  "; eps_hat(ts-dp, 0.1)=" + fmt(priv.estimate.eps_hat) +
                  (directional ? " <= " : " > ") + "eps_hat(ts)"};
}

Outcome determinism_and_schema(const fs::path& scratch) {
  std::ofstream(scratch / "tape.csv") << "t,arm0,arm1,arm2\n0,1,0,0.5\n1,0,1,0.5\n";
  std::ofstream(scratch / "traj.csv") << "count\n0\n2\n1\n";
  const std::vector<std::vector<std::string>> commands{
      {"simulate", "--arms", "0.9,0.8,0.7,0.6,0.5", "--horizon", "300", "--runs", "8", "--agent",
       "ts-dp", "--epsilon", "2", "--seed", "9", "--out"},
      {"simulate", "--arms", "0.4,0.6", "--horizon", "300", "--runs", "8", "--agent", "ucb1",
       "--seed", "9", "--out"},
      {"account", "--horizon", "512", "--out"},
      {"account", "--horizon", "64", "--trajectory", (scratch / "traj.csv").string(), "--out"},
      {"audit", "--tape", (scratch / "tape.csv").string(), "--diff-round", "1", "--diff-arm", "2",
       "--alt-reward", "0", "--trials", "20000", "--agent", "ts", "--seed", "1", "--out"},
  };
  const std::vector<std::vector<std::string>> files{
      {"runs.csv", "summary.json"}, {"runs.csv", "summary.json"}, {"account.json"},
      {"account.json"}, {"audit.json"}};

  bool same = true;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    for (const char* run : {"a", "b"}) {
      auto args = commands[i];
      args.push_back((scratch / (std::to_string(i) + run)).string());
      const int code = quiet_cli(args);
      if (code != 0) return {false, "command " + std::to_string(i) + " exited " + std::to_string(code)};
    }
    for (const auto& f : files[i]) {
      same &= slurp(scratch / (std::to_string(i) + "a") / f) ==
              slurp(scratch / (std::to_string(i) + "b") / f);
    }
  }

  bool schema = true;
  const auto csv = slurp(scratch / "0a" / "runs.csv");
  schema &= csv.rfind("run_id,t,action,reward,cum_regret\n", 0) == 0;
  schema &= std::count(csv.begin(), csv.end(), '\n') == 1 + 8 * 300;
  const auto summary = io::Json::parse(slurp(scratch / "0a" / "summary.json"));
  schema &= json_keys(summary) == std::vector<std::string>{"mean_final_regret", "std_final_regret",
                                                           "ci95_halfwidth", "per_arm_pulls_mean",
                                                           "regret_bound_privacy"};
  const auto plain = io::Json::parse(slurp(scratch / "1a" / "summary.json"));
  schema &= json_keys(plain) == std::vector<std::string>{"mean_final_regret", "std_final_regret",
                                                         "ci95_halfwidth", "per_arm_pulls_mean"};
  const auto account = io::Json::parse(slurp(scratch / "2a" / "account.json"));
  schema &= json_keys(account) == std::vector<std::string>{"T", "eps_composed", "delta_total",
                                                           "branch", "eps_theorem1",
                                                           "delta_theorem1", "per_step"};
  schema &= account["per_step"].size() == 512;
  const auto custom = io::Json::parse(slurp(scratch / "3a" / "account.json"));
  schema &= custom["per_step"].size() == 3 && custom["per_step"][1]["count"] == 2;
  const auto report = io::Json::parse(slurp(scratch / "4a" / "audit.json"));
  const auto rk = json_keys(report);
  schema &= rk.size() >= 4 &&
            std::vector<std::string>(rk.begin(), rk.begin() + 4) ==
                std::vector<std::string>{"eps_hat", "ci_upper", "eps_analytical", "pass"};
  return {same && schema, std::string("byte-identical=") + (same ? "yes" : "no") +
                              " schema=" + (schema ? "ok" : "mismatch")};
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / "dpbandit_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch / "audit");
  fs::create_directories(scratch / "det");

  const std::vector<Criterion> criteria{
      {"1 IDENTITY", 5.0, identity},
      {"2 CLOSED-FORM VALIDITY", 1.0, closed_form_validity},
      {"3 COMPOSITION SCALING", 60.0, composition_scaling},
      {"4 REGRET", 300.0, regret},
      {"5 EMPIRICAL PRIVACY", 300.0, [&] { return empirical_privacy(scratch / "audit"); }},
      {"6 DETERMINISM & SCHEMA", 300.0, [&] { return determinism_and_schema(scratch / "det"); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool ok = o.pass && in_time;
    failed += ok ? 0 : 1;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.name << " (" << fmt(secs, 3) << " s"
              << (in_time ? "" : ", over the " + fmt(c.time_limit_s) + " s limit") << "): "
              << o.detail << std::endl;
  }
  fs::remove_all(scratch);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
