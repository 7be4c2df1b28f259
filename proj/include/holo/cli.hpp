#pragma once

#include <iosfwd>

namespace holo::cli {

/// Entry point of the `holo` tool: solve, render, bench and calibrate
/// subcommands. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holo::cli
