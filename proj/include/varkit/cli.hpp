#ifndef VARKIT_CLI_HPP
#define VARKIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace varkit {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;  // check: some constructor rejected; oracle: violation
inline constexpr int kExitError = 2;     // usage, I/O, parse or well-formedness errors
inline constexpr int kExitMismatch = 3;  // diff: accepted but the oracle found a violation

// Entry point of the `varkit` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace varkit

#endif  // VARKIT_CLI_HPP
