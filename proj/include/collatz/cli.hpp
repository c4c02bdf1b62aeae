#pragma once

// Command-line front end: seq, reverse, analyze, scan, verify.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "collatz/core.hpp"

namespace collatz::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitBudgetExhausted = 2,
  kExitCycleDetected = 3,
  kExitUsage = 64,
  kExitIo = 74,
};

/// Exit code for a terminated trace; depends on the stop reason only.
int exit_code_for(StopReason reason);

enum class OutputFormat { Text, JsonRecords, Csv };

/// "text", "json" (alias "json-records") or "csv".
std::optional<OutputFormat> parse_format(std::string_view text);

/// Environment variable holding the default output format.
inline constexpr const char* kFormatEnv = "COLLATZ_FORMAT";

/// Quotes a CSV field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view value);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace collatz::cli
