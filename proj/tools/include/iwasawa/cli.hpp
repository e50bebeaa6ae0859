#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iwasawa::cli {

/// Exit codes: 0 HOLDS / PROPAGATED / CONGRUENT / certificate issued,
/// 2 FAILS / CONFLICT / PARITY_VIOLATION / NOT_CONGRUENT, 3 UNKNOWN, 1 errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFails = 2;
inline constexpr int kExitUnknown = 3;

/// args excludes the program name. The report goes to `out` (JSON or
/// Markdown); diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iwasawa::cli
