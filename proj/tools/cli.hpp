#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcsimple::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;         // bad flags, domain or capability errors
inline constexpr int kExitData = 3;          // unreadable/malformed/degenerate input
inline constexpr int kExitVerification = 4;  // an oracle check failed

// Entry point shared by the executable and the tests. `args` excludes argv[0].
// Subcommands: simulate | select | roc | verify | eval.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcsimple::cli
