#pragma once

// Command dispatch for the command-line tool.

#include <ostream>
#include <string>

#include "twistor/config.hpp"
#include "twistor/report.hpp"

namespace twistor {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInconclusive = 3;

struct RunOutcome {
  int exit_code = kExitOk;
  Json report;
};

// Validates and runs one command. Errors never escape: they are mapped to
// exit codes and recorded under "status" in the report.
RunOutcome run(const RunConfig& config);

// A report carrying only an error, for failures before a config exists.
Json error_report(const std::string& command, const std::string& kind,
                  const std::string& message, int exit_code);

// Writes the report to config.output.path, or to `out` when the path is
// empty. Returns the exit code.
int write_report(const Json& report, const OutputConfig& output, int exit_code,
                 std::ostream& out);

}  // namespace twistor
