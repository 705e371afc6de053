#pragma once

#include <string>
#include <vector>

namespace eqmine {

// Entry point shared by the eqmine binary and the tests. `args` excludes the
// program name, e.g. {"discover", "--left", "r.csv", "--right", "s.csv"}.
// Exit codes: 0 completed, 1 I/O or data error, 2 usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace eqmine
