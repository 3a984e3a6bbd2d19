#ifndef HBA_TOOLS_CLI_HPP_
#define HBA_TOOLS_CLI_HPP_

#include <iosfwd>

namespace hba::tools {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitIo = 3 };

// Entry point of the `hba` executable, callable in-process from tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hba::tools

#endif  // HBA_TOOLS_CLI_HPP_
