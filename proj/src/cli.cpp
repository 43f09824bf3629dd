#include "dpbandit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "dpbandit/io.hpp"

namespace dpbandit::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

// I/O failures map to exit code 1; everything else thrown during a command is
// an input problem (exit 2).
class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raw flag text keyed by the config-file name (long flag without dashes, '_' for '-').
struct Flags {
  std::map<std::string, std::string> text;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App& app, const std::string& flag, const std::string& help) {
    auto key = flag;
    std::replace(key.begin(), key.end(), '-', '_');
    options[key] = app.add_option("--" + flag, text[key], help);
  }

  bool has(const std::string& key) const { return !text.at(key).empty(); }
  const std::string& get(const std::string& key) const {
    if (!has(key)) throw ConfigError("missing required flag --" + dashed(key));
    return text.at(key);
  }
  static std::string dashed(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
  }
};

std::string json_scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return io::format_double(v.get<double>());
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  throw ConfigError("config values must be numbers, strings, or arrays of numbers");
}

// Fills flags that were not given on the command line from a JSON object.
void merge_config(Flags& flags, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config file: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "config" || !flags.options.contains(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    if (flags.options[key]->count() > 0) continue;
    std::string text;
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) text += ',';
        text += json_scalar_text(value[i]);
      }
    } else {
      text = json_scalar_text(value);
    }
    flags.text[key] = text;
  }
}

std::uint64_t uint_or(const Flags& f, const std::string& key, std::uint64_t fallback) {
  return f.has(key) ? io::parse_uint(f.get(key)) : fallback;
}

AgentSpec parse_agent(const Flags& f, std::uint64_t horizon) {
  const std::string kind = f.has("agent") ? f.get("agent") : "ts";
  if (kind == "ts") return AgentSpec::ts_standard();
  if (kind == "ucb1") return AgentSpec::ucb1();
  if (kind == "ts-dp") {
    auto spec = AgentSpec::ts_privacy(io::parse_double(f.get("epsilon")), horizon);
    spec.validate();
    return spec;
  }
  throw ConfigError("--agent must be one of ts, ts-dp, ucb1");
}

void warn_weak_target(const AgentSpec& agent, std::ostream& err) {
  if (agent.kind != AgentKind::TSPrivacy) return;
  const double log_t = std::log(static_cast<double>(agent.horizon));
  if (agent.epsilon_target > log_t * log_t) {
    err << "warning: epsilon " << io::format_double(agent.epsilon_target)
        << " exceeds (ln T)^2 = " << io::format_double(log_t * log_t)
        << "; posterior variance is below the standard agent's\n";
  }
}

fs::path output_dir(const Flags& f) {
  fs::path dir = f.has("out") ? fs::path(f.get("out")) : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create output directory " + dir.string());
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoFailure("failed writing " + path.string());
}

int cmd_simulate(const Flags& f, std::ostream& out, std::ostream& err) {
  harness::ExperimentConfig cfg;
  cfg.env.arm_means = io::parse_double_list(f.get("arms"));
  cfg.horizon = io::parse_uint(f.get("horizon"));
  cfg.runs = uint_or(f, "runs", 1);
  cfg.base_seed = uint_or(f, "seed", 0);
  cfg.agent = parse_agent(f, cfg.horizon);
  cfg.validate();
  warn_weak_target(cfg.agent, err);

  const auto result = harness::run_many(cfg);
  const auto dir = output_dir(f);
  std::ostringstream csv;
  io::write_runs_csv(csv, result.records);
  write_file(dir / "runs.csv", csv.str());
  write_file(dir / "summary.json", io::dump_json(io::summary_json(result)));
  out << "mean_final_regret " << io::format_double(result.summary.mean_final_regret) << '\n';
  return kOk;
}

int cmd_account(const Flags& f, std::ostream& out) {
  const std::uint64_t horizon = io::parse_uint(f.get("horizon"));
  if (horizon < 2) throw ConfigError("--horizon must be at least 2");
  const auto alloc = accountant::default_allocation(horizon);
  const double delta_step = f.has("delta_step") ? io::parse_double(f.get("delta_step"))
                                                : alloc.delta_step;
  const double slack = f.has("slack") ? io::parse_double(f.get("slack")) : alloc.slack;
  if (!(delta_step > 0.0 && delta_step < 0.5)) throw ConfigError("--delta-step must lie in (0, 1/2)");
  if (!(slack >= 0.0 && slack < 1.0)) throw ConfigError("--slack must lie in [0, 1)");

  std::vector<std::uint64_t> counts;
  if (f.has("trajectory")) {
    std::ifstream in(f.get("trajectory"));
    if (!in) throw ConfigError("cannot open trajectory file " + f.get("trajectory"));
    counts = io::read_trajectory_csv(in);
  } else {
    counts = accountant::default_trajectory(horizon);
  }
  const auto account = accountant::account_run_detailed(counts, delta_step, slack);
  write_file(output_dir(f) / "account.json", io::dump_json(io::account_json(horizon, account)));
  out << "eps_composed " << io::format_double(account.budget.epsilon) << " ("
      << accountant::to_string(account.budget.branch) << ")\n";
  return kOk;
}

int cmd_audit(const Flags& f, std::ostream& out, std::ostream& err) {
  std::ifstream in(f.get("tape"));
  if (!in) throw ConfigError("cannot open tape file " + f.get("tape"));
  auto tape = io::read_tape_csv(in);
  audit::outcome_space(tape.arms(), tape.rounds());
  if (tape.rounds() < 2) throw ConfigError("audit tapes need at least 2 rounds");

  const std::uint64_t trials = io::parse_uint(f.get("trials"));
  if (trials == 0) throw ConfigError("--trials must be positive");
  const auto agent = parse_agent(f, tape.rounds());
  if (agent.kind == AgentKind::UCB1) throw ConfigError("audit supports --agent ts or ts-dp");
  warn_weak_target(agent, err);

  audit::NeighborPair pair{std::move(tape), static_cast<std::size_t>(io::parse_uint(f.get("diff_round"))),
                           static_cast<std::size_t>(io::parse_uint(f.get("diff_arm"))),
                           io::parse_double(f.get("alt_reward"))};
  pair.validate();

  const auto report = audit::audit_algorithm(agent, pair, trials, uint_or(f, "seed", 0));
  write_file(output_dir(f) / "audit.json",
             io::dump_json(io::audit_json(report, pair, agent, trials)));
  out << "eps_hat " << io::format_double(report.estimate.eps_hat) << " eps_analytical "
      << io::format_double(report.analytical.budget.epsilon) << (report.pass ? " pass" : " FAIL")
      << (report.low_power ? " (low power)" : "") << '\n';
  return report.pass ? kOk : kPrivacyViolated;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thompson sampling privacy laboratory", "dpbandit"};
  app.require_subcommand(1);

  Flags sim, acc, aud;
  std::string sim_cfg, acc_cfg, aud_cfg;

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo regret experiment");
  simulate->add_option("--config", sim_cfg, "JSON file with flag values");
  sim.add(*simulate, "arms", "comma-separated Bernoulli arm means");
  sim.add(*simulate, "horizon", "rounds per run");
  sim.add(*simulate, "runs", "number of runs (default 1)");
  sim.add(*simulate, "agent", "ts | ts-dp | ucb1 (default ts)");
  sim.add(*simulate, "epsilon", "privacy target for ts-dp");
  sim.add(*simulate, "seed", "base seed (default 0)");
  sim.add(*simulate, "out", "output directory (default .)");

  auto* account = app.add_subcommand("account", "composed privacy budget");
  account->add_option("--config", acc_cfg, "JSON file with flag values");
  acc.add(*account, "horizon", "T");
  acc.add(*account, "trajectory", "CSV of pull counts (default 0..T-1)");
  acc.add(*account, "delta-step", "per-sample delta (default T^-5/2)");
  acc.add(*account, "slack", "composition slack (default T^-4/2)");
  acc.add(*account, "out", "output directory (default .)");

  auto* auditc = app.add_subcommand("audit", "empirical privacy audit on neighbor tapes");
  auditc->add_option("--config", aud_cfg, "JSON file with flag values");
  aud.add(*auditc, "tape", "reward tape CSV (t,arm0,arm1,...)");
  aud.add(*auditc, "diff-round", "round of the changed reward");
  aud.add(*auditc, "diff-arm", "arm of the changed reward");
  aud.add(*auditc, "alt-reward", "replacement reward");
  aud.add(*auditc, "trials", "episodes per tape");
  aud.add(*auditc, "agent", "ts | ts-dp (default ts)");
  aud.add(*auditc, "epsilon", "privacy target for ts-dp");
  aud.add(*auditc, "seed", "seed (default 0)");
  aud.add(*auditc, "out", "output directory (default .)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (simulate->parsed()) {
      if (!sim_cfg.empty()) merge_config(sim, sim_cfg);
      return cmd_simulate(sim, out, err);
    }
    if (account->parsed()) {
      if (!acc_cfg.empty()) merge_config(acc, acc_cfg);
      return cmd_account(acc, out);
    }
    if (!aud_cfg.empty()) merge_config(aud, aud_cfg);
    return cmd_audit(aud, out, err);
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace dpbandit::cli
