#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skillprobe {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalidInput = 2,
  kExitConnectorFailures = 3,
};

// The `skillprobe` command line. `args` excludes the program name. Defaults
// for unset flags may come from the JSON file named by SKILLPROBE_CONFIG.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace skillprobe
