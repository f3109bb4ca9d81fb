#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hclab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

/// Entry point for the hclab executable.
int run(int argc, char** argv);

/// Same, with explicit argument list (without the program name) and streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hclab::cli
