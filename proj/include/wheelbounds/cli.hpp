#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wheelbounds {

/// Runs one command-line invocation against the given streams and returns
/// the process exit code: 0 success, 1 internal error, 2 rejected input,
/// 3 verification failed. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wheelbounds
