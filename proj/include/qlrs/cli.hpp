#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qlrs {

inline constexpr const char* version = "0.1.0";

// Entry point shared by the binary and the tests. Returns the process exit
// code: 0 success, 2 usage or input error, 3 solver infeasibility,
// 4 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlrs
