#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gbb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Parses the arguments (without the program name), runs one experiment and
/// writes its report. Returns 0 on success, 2 on configuration or contract
/// errors, 3 on numerical, oracle or I/O failures. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace gbb::cli
