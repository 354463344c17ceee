#pragma once
#include <iosfwd>

namespace ridge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Full command-line entry point: `ridgeapprox <curve|audit|spectrum|sobol>
/// --config <path> [--out <dir>] [--seed <u64>] [--threads <n>]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ridge::cli
