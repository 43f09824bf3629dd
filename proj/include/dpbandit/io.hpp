#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "dpbandit/accountant.hpp"
#include "dpbandit/audit.hpp"
#include "dpbandit/harness.hpp"

// File formats shared by the command-line tool and anything that consumes its
// output. Every floating-point value is written with 17 significant digits
// ("%.17g"), so parsing the text recovers the exact double.
namespace dpbandit::io {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

/// Strict decimal parse of the whole string (std::from_chars). Throws ConfigError.
double parse_double(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

/// Comma-separated list of reals.
std::vector<double> parse_double_list(std::string_view text);

/// Pretty-printed JSON (2-space indent, trailing newline) with floats in %.17g.
/// Non-finite floats are written as null.
std::string dump_json(const Json& doc);

/// Header `run_id,t,action,reward,cum_regret`, one row per run per round.
void write_runs_csv(std::ostream& out, const std::vector<harness::RunRecord>& records);

/// SummaryStats fields, plus regret_bound_privacy for a TS-Privacy agent
/// (null when K < 2).
Json summary_json(const harness::ExperimentResult& result);

/// {T, eps_composed, delta_total, branch, eps_theorem1, delta_theorem1, per_step}.
Json account_json(std::uint64_t horizon, const accountant::RunAccount& account);

Json audit_json(const audit::AuditReport& report, const audit::NeighborPair& pair,
                const AgentSpec& agent, std::uint64_t trials);

/// Header `t,arm0,arm1,...,arm{K-1}`, then rows t = 0, 1, ..., T-1 in order.
/// Throws ConfigError on any deviation.
audit::RewardTape read_tape_csv(std::istream& in);

/// Pull counts, one per line; an optional first line `count` is skipped.
/// Throws ConfigError on malformed input or an empty list.
std::vector<std::uint64_t> read_trajectory_csv(std::istream& in);

}  // namespace dpbandit::io
