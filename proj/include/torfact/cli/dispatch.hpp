#pragma once

#include <ostream>

#include "torfact/error.hpp"

namespace torfact::cli {

/// 0 success, 1 input errors, 2 NearSingular / Inconclusive, a distinct code
/// >= 3 for every other failure kind.
int exit_code(ErrorKind kind);

/// Runs one subcommand. The human report goes to `out`, the structured error
/// record (one JSON line) to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace torfact::cli
