#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specpert::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Default seed for every randomized command.
inline constexpr unsigned long long kDefaultSeed = 20240613ULL;

/// Runs one command. args excludes the program name. Results go to files
/// named by --json/--csv/--pgm, or to `out` as JSON when no path is given;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace specpert::cli
