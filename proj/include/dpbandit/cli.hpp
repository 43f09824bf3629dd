#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpbandit::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kIoFailure = 1;
inline constexpr int kInvalidInput = 2;
inline constexpr int kPrivacyViolated = 3;

/// Entry point of the `dpbandit` tool. `args` excludes the program name.
///
///   dpbandit simulate --arms 0.9,0.5 --horizon 1000 --runs 20 --agent ts --seed 7 --out dir
///   dpbandit account  --horizon 1024 [--trajectory counts.csv] [--delta-step x] [--slack y]
///   dpbandit audit    --tape tape.csv --diff-round 0 --diff-arm 0 --alt-reward 1 --trials N
///
/// Each subcommand also accepts --config file.json whose keys mirror the long
/// flag names with '-' replaced by '_'; unknown keys are rejected and explicit
/// flags take precedence.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpbandit::cli
