#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace clum::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitDomain = 2,
  kExitCapacity = 3,
  kExitNumeric = 4,
};

// Entry point behind the `clum` binary. Reports go to `out` as one JSON
// object per line; diagnostics and errors go to `err`. args[0] is the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Embedded invariant suite behind `clum selftest`.
nlohmann::json run_selftest();

}  // namespace clum::cli
