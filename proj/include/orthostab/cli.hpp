#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace orthostab::cli {

enum ExitCode : int {
  kPass = 0,
  kPropertyFailure = 1,
  kConfigError = 2,
  kNumericalAbort = 3,
};

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// files or to `out`; diagnostics go to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace orthostab::cli
