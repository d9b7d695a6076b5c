#pragma once

#include <iosfwd>

namespace beliefnet {

/// Entry point of the `beliefnet` tool. Returns 0 on success, 1 on a runtime
/// error and 2 on misuse (no subcommand, unknown flags).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace beliefnet
