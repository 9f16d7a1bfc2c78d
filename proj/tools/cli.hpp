#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace watt::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumerical = 3,
};

struct Options {
  bool styled = false;  // ANSI emphasis in human-readable tables
};

/// Runs one invocation. `args` excludes the program name. Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, Options options = {});

}  // namespace watt::cli
