#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tmlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;

// Entry point of the tm_lab tool. args excludes the program name. Reports go
// to out (or to --output), diagnostics to err. Returns 0 or 2.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tmlab
