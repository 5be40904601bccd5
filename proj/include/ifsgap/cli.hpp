#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ifsgap::cli {

inline constexpr const char* kToolName = "ifsgap";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kVerdictFailed = 1, kUsage = 2, kResource = 3 };

/// Runs one command line (without the program name). Reports go to `out` or to the
/// --output file; diagnostics go to `err`.
///
/// Budget ceilings can be lowered or raised with IFSGAP_MAX_INTERVALS (cover size for
/// approximations) and IFSGAP_MAX_GAPS (enumerated gap values).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifsgap::cli
