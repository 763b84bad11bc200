#pragma once

#include <iosfwd>

namespace definetti::cli {

// Parses argv, runs one subcommand and writes a single JSON document (or a
// key/value table) to out. Returns 0 on success, 2 for invalid input, 3 when
// a budget cap is hit and 4 when a solver runs out of iterations.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace definetti::cli
