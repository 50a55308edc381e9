// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace admgid::cli {

/// Exit codes.
enum Exit : int {
  kOk = 0,
  kVerifyMismatch = 1,
  kParseError = 2,
  kInvalidInput = 3,
  kDiverged = 4,
};

/// Environment variable holding the worker count for `survey`.
inline constexpr const char *kWorkersEnv = "ADMGID_WORKERS";

/// Runs the command line `args` (args[0] is the program name) writing to
/// the given streams; returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace admgid::cli
