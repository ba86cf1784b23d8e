#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ocular::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitEngineError = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ocular::cli
