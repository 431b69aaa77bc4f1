#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace morphdecomp::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,     // numerical failure inside a sweep or decomposition
  kInputError = 2,  // bad flags, malformed or missing input files, bad parameters
  kInfeasible = 3,  // unnormalized or negative distribution
  kIoError = 4,     // output cannot be written
};

// Runs one command. `args` excludes the program name. Reports go to `out`,
// diagnostics to `err`. Default --jobs comes from MORPHDECOMP_JOBS.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morphdecomp::cli
