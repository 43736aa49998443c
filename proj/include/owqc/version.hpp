#pragma once

namespace owqc {

inline constexpr const char* kToolName = "owqc";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace owqc
