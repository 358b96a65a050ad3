/// @file cli.hpp
/// @brief Command-line entry point: run, sweep, baseflow and check subcommands.
#pragma once

#include <iosfwd>
#include <vector>

#include "couette/config.hpp"
#include "couette/verification.hpp"

namespace couette {

/// Exit status: 0 success, 1 verification failure, 2 usage or configuration error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// The built-in verification suite run by `check`.
std::vector<CheckResult> run_checks(const RunConfig& config);

}  // namespace couette
