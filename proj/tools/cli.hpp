#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reviewbomb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInvariant = 2;

/// Runs `rbomb <args...>` in-process. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reviewbomb::cli
