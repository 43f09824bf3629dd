#include "dpbandit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace dpbandit::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

void dump_value(const Json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        dump_value(item, indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_value(v[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_double(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ConfigError("not a nonnegative integer: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> values;
  for (auto part : split(text, ',')) values.push_back(parse_double(part));
  return values;
}

std::string dump_json(const Json& doc) {
  std::string out;
  dump_value(doc, 0, out);
  out += '\n';
  return out;
}

void write_runs_csv(std::ostream& out, const std::vector<harness::RunRecord>& records) {
  out << "run_id,t,action,reward,cum_regret\n";
  for (const auto& r : records) {
    for (std::size_t t = 0; t < r.actions.size(); ++t) {
      out << r.run_id << ',' << t << ',' << r.actions[t] << ',' << format_double(r.rewards[t])
          << ',' << format_double(r.cum_regret[t]) << '\n';
    }
  }
}

Json summary_json(const harness::ExperimentResult& result) {
  const auto& s = result.summary;
  Json doc;
  doc["mean_final_regret"] = s.mean_final_regret;
  doc["std_final_regret"] = s.std_final_regret;
  doc["ci95_halfwidth"] = s.ci95_halfwidth;
  doc["per_arm_pulls_mean"] = s.per_arm_pulls_mean;
  const auto& cfg = result.config;
  if (cfg.agent.kind == AgentKind::TSPrivacy) {
    if (cfg.env.arms() >= 2) {
      doc["regret_bound_privacy"] =
          harness::regret_bound_privacy(cfg.horizon, cfg.env.arms(), cfg.agent.epsilon_target);
    } else {
      doc["regret_bound_privacy"] = nullptr;
    }
  }
  return doc;
}

Json account_json(std::uint64_t horizon, const accountant::RunAccount& account) {
  const auto thm = accountant::theorem1_budget(horizon);
  Json doc;
  doc["T"] = horizon;
  doc["eps_composed"] = account.budget.epsilon;
  doc["delta_total"] = account.budget.delta;
  doc["branch"] = accountant::to_string(account.budget.branch);
  doc["eps_theorem1"] = thm.epsilon;
  doc["delta_theorem1"] = thm.delta;
  Json steps = Json::array();
  for (const auto& s : account.per_step) {
    Json item;
    item["count"] = s.count;
    item["epsilon"] = s.epsilon;
    item["delta"] = s.delta;
    steps.push_back(std::move(item));
  }
  doc["per_step"] = std::move(steps);
  return doc;
}

Json audit_json(const audit::AuditReport& report, const audit::NeighborPair& pair,
                const AgentSpec& agent, std::uint64_t trials) {
  Json doc;
  doc["eps_hat"] = report.estimate.eps_hat;
  doc["ci_upper"] = report.estimate.ci_upper;
  doc["eps_analytical"] = report.analytical.budget.epsilon;
  doc["pass"] = report.pass;
  doc["low_power"] = report.low_power;
  doc["delta"] = report.delta;
  doc["delta_analytical"] = report.analytical.budget.delta;
  doc["branch"] = accountant::to_string(report.analytical.budget.branch);
  doc["agent"] = to_string(agent.kind);
  if (agent.kind == AgentKind::TSPrivacy) doc["epsilon_target"] = agent.epsilon_target;
  doc["T"] = pair.base.rounds();
  doc["K"] = pair.base.arms();
  doc["diff_round"] = pair.round;
  doc["diff_arm"] = pair.arm;
  doc["base_reward"] = pair.base.at(pair.round, pair.arm);
  doc["alt_reward"] = pair.alt_reward;
  doc["trials"] = trials;
  if (report.estimate.argmax_outcome) {
    doc["argmax_outcome"] = report.hist_base.decode(*report.estimate.argmax_outcome);
  } else {
    doc["argmax_outcome"] = nullptr;
  }
  doc["counts_base"] = report.hist_base.counts;
  doc["counts_neighbor"] = report.hist_neighbor.counts;
  return doc;
}

audit::RewardTape read_tape_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("tape CSV is empty");
  const auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "t") throw ConfigError("tape CSV header must be t,arm0,...");
  const std::size_t arms = header.size() - 1;
  for (std::size_t i = 0; i < arms; ++i) {
    if (header[i + 1] != "arm" + std::to_string(i)) {
      throw ConfigError("tape CSV header must be t,arm0,arm1,...");
    }
  }
  std::vector<double> values;
  std::size_t rounds = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != arms + 1) throw ConfigError("tape CSV row has the wrong number of cells");
    if (parse_uint(cells[0]) != rounds) throw ConfigError("tape CSV rows must be t = 0, 1, ...");
    for (std::size_t i = 0; i < arms; ++i) values.push_back(parse_double(cells[i + 1]));
    ++rounds;
  }
  if (rounds == 0) throw ConfigError("tape CSV has no rows");
  return audit::RewardTape(rounds, arms, std::move(values));
}

std::vector<std::uint64_t> read_trajectory_csv(std::istream& in) {
  std::vector<std::uint64_t> counts;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto cell = trim(line);
    if (first && cell == "count") {
      first = false;
      continue;
    }
    first = false;
    if (cell.empty()) continue;
    counts.push_back(parse_uint(cell));
  }
  if (counts.empty()) throw ConfigError("trajectory CSV has no counts");
  return counts;
}

}  // namespace dpbandit::io
