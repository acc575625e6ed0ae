#pragma once

#include <ostream>

namespace gtr {

// Entry point of the gtr command-line tool. Returns 0 on success, 1 for usage
// and validation errors, 2 when a model backend fails. Diagnostics go to `err`
// with a "GTR-ERR:<code>:" prefix.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gtr
