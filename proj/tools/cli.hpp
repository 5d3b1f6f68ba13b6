#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvcap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitReplayMismatch = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitUnconverged = 3;
inline constexpr int kExitStage = 4;
inline constexpr int kExitParaaccretive = 5;

// Runs one command; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest decimal that round-trips.
std::string format_double(double v);

}  // namespace curvcap::cli
