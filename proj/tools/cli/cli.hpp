#ifndef CODA_TOOLS_CLI_HPP
#define CODA_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace coda::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitDegenerate = 3;

/// Runs `coda_cli` with `args` (program name excluded). Reports go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coda::cli

#endif
