#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace damctl {

/// Entry point behind main(): parses argv (without the program name),
/// dispatches the subcommand, writes results to `out` (or --out file) and
/// diagnostics to `err`. Returns 0 on success, 2 on configuration or I/O
/// errors, 3 on numeric/convergence errors and failed validation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace damctl
