// ckr-lie subcommands. Everything the executable does is reachable through run().
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace ckrlie::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

struct Invocation {
  std::string command;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  /// verify-algebra: random points; other commands: replaces range.points.
  std::optional<std::size_t> points;
  unsigned jobs = 1;
  bool validate_only = false;
  std::optional<std::string> out_dir;
};

[[nodiscard]] const std::vector<std::string>& command_names();

/// Runs one subcommand, writing result files under the output directory and a one-line
/// summary to `out`. Errors go to `err`; the return value is the process exit status.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

}  // namespace ckrlie::cli
