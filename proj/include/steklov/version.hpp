#pragma once

namespace steklov {

inline constexpr const char* kToolName = "steklov";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace steklov
