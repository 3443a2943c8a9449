#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fusion::cli {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitConvergence = 4;

// args excludes the program name. Results go to out; the error line goes to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fusion::cli
