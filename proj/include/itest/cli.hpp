#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace itest {

// Entry point of the `itest` command. Returns the process exit code:
// 0 success, 1 test failures (or files that could not be processed),
// 2 usage or internal errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace itest
