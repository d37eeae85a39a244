#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epenc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 1;

/// Runs the ep_encircle command line on args, program name excluded.
/// Results go to `out` unless --out is given; diagnostics go to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace epenc::cli
