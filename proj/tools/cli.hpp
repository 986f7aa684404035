#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scorelab::cli {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAuditFailure = 2;

/// Runs one command line. args excludes the program name. Output goes to
/// `out`, diagnostics and usage text to `err`; files named by --out are
/// written directly.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Folds a flat key=value config file into the argument list. Keys mirror long
/// flag names without dashes; flags already present on the command line win.
std::vector<std::string> apply_config_file(const std::vector<std::string>& args);

}  // namespace scorelab::cli
