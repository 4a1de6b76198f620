#pragma once

#include <string>
#include <vector>

namespace infoveil::cli {

/// Parses and runs one subcommand. `args` excludes the program name.
/// Returns 0 on success, 1 on usage errors, 2 on data or domain errors.
/// Writes exactly one summary line to stdout on success; diagnostics go to
/// stderr.
int run(const std::vector<std::string>& args);

} // namespace infoveil::cli
