#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace thsmooth::cli {

/// Exit codes.
inline constexpr int kOk = 0;
/// Bad flags, unknown keys, contract or preset violations.
inline constexpr int kUsage = 1;
/// I/O failures, solver stagnation, descent violations in audit mode.
inline constexpr int kRuntime = 2;

/// Runs one command line; args excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace thsmooth::cli
