#pragma once

#include <ostream>

#include "config.hpp"
#include "report.hpp"

namespace triples::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kCheckFailed = 1,
    kValidation = 2,
    kNumericalGuard = 3,
    kIo = 4,
    kInternal = 5,
};

int exit_code_for(ErrorKind kind) noexcept;

/// Runs one experiment in process. Throws Error on invalid input or numerical guards.
RunResult run(const ExperimentConfig& cfg);

/// Parses arguments, runs, writes artifacts and prints the summary (or an error
/// object) as JSON on `out`. Returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out);

}  // namespace triples::cli
