#pragma once

namespace mdpkit {

/// Entry point for the mdpkit command-line tool. Returns the process exit
/// code: 0 success, 1 validation/usage error, 2 internal invariant breach.
int run_cli(int argc, const char* const* argv);

}  // namespace mdpkit
