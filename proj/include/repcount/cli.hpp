#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace repcount {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one CLI invocation. `args` excludes the program name.
/// Subcommands: count | eval | sweep | ablate | synth | export-waveform.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace repcount
