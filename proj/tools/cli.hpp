#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magnoblock::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kUsage = 2;
inline constexpr int kRuntime = 3;

inline constexpr const char* kFigureNames[] = {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};

/// Runs the command line `args` (without the program name). Normal output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace magnoblock::cli
