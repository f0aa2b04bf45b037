#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace schmidtfock::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;  // a verification or monotonicity check failed
inline constexpr int exit_usage = 2;   // bad flags, inconsistent config, unreadable input

/// Options shared by every command after parsing.
struct RunConfig {
  std::string command;
  std::string statistics = "fermion";
  int n = 0, m = 0;  // paired commands
  int d = 0, N = 0;  // generic commands
  std::string g_grid = "default";
  std::vector<std::size_t> truncations{1};
  std::uint64_t seed = 0;
  std::string out;  // file, or directory receiving <command>.<format>
  std::string format = "csv";
  int jobs = 1;
};

/// Runs one command line; writes results to `out` (or the --out target) and
/// diagnostics to `err`. Returns one of the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace schmidtfock::cli
