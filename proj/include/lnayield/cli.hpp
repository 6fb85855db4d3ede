#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lnayield {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitRuntime = 4;

/// Parses `args` (args[0] is the program name) and runs one subcommand.
/// Returns the process exit status; never throws.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, char** argv);

}  // namespace lnayield
