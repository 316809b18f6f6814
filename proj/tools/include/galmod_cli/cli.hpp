#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace galmod::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFlagged = 3;

inline constexpr const char *kSchemaVersion = "1.0";

/// Run the driver on argv-style arguments (without the program name).
/// Reports go to `out` (or to the --out file), diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace galmod::cli
