#pragma once

#include <ostream>

namespace weaklab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the weaklab executable. Reports go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace weaklab::cli
