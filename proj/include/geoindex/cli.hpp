#pragma once

#include <ostream>

namespace geoindex {

// Exit codes of the command-line front end.
inline constexpr int kExitComputed = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitContradiction = 2;

/// Parses argv and runs one subcommand. Tables or JSON go to `out`,
/// diagnostics to `err` as "error[<code>]: <message>".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geoindex
