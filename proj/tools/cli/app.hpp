#pragma once

#include <exception>
#include <string>
#include <vector>

namespace ddae::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitFlags = 2;
inline constexpr int kExitNewton = 3;
inline constexpr int kExitEigensolve = 4;
inline constexpr int kExitMatching = 5;

/// Runs one command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args);

/// Maps an error escaping a command to its exit code, printing a diagnostic
/// to stderr.
int exit_code(const std::exception_ptr& error);

}  // namespace ddae::cli
