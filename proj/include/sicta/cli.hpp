#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sicta {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitValidationFailed = 1, kExitUsage = 2 };

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out` unless `--out FILE` is given, in which case FILE and
/// FILE.manifest.json are written. Errors are reported on `err` as one JSON
/// object {"error": kind, "message": text}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace sicta
