#pragma once

#include <iosfwd>

namespace tracekit::cli {

enum ExitCode { kClean = 0, kFindings = 1, kInputError = 2, kResourceBound = 3 };

inline constexpr const char* kVersion = "0.1.0";

// Parses argv and runs one subcommand. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tracekit::cli
