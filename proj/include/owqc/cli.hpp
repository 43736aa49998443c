#pragma once

namespace owqc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNonConvergence = 3;

/// Entry point shared by the binary and the tests; argv[0] is the program
/// name. Returns one of the exit codes above.
int run(int argc, const char* const* argv);

}  // namespace owqc::cli
