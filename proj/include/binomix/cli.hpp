#pragma once

namespace binomix {

inline constexpr const char* kVersion = "0.1.0";

/// Runs the command line; returns the process exit code (0 ok, 1 usage,
/// 2 data, 3 numerical). Results go to stdout or --out, errors to stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace binomix
