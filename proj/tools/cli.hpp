#ifndef FLYSCAN_TOOLS_CLI_HPP
#define FLYSCAN_TOOLS_CLI_HPP

#include <iosfwd>

namespace flyscan::cli {

enum ExitCode : int
{
  kOk = 0,
  kIoFailure = 1,
  kConfigFailure = 2,
  kNumericalFailure = 3,
};

/// Entry point of the `flyscan` tool; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace flyscan::cli

#endif
