#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace skt::cli {

/// Exit codes shared by all subcommands.
enum Exit : int {
  ok = 0,
  error = 1,          ///< parse error, invalid input, I/O failure
  not_satisfied = 2,  ///< check: theorem does not apply; certify: no certificate
  blow_up = 3,
  budget = 4,
};

/// Runs the command line `args` (without the program name), writing
/// machine output to `out` and messages to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skt::cli
