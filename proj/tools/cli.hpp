#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phaseswap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitValidation = 3;

/// Runs the phaseswap command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splices `key = value` lines from a config file in front of the
/// subcommand's own flags, so flags given on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace phaseswap::cli
