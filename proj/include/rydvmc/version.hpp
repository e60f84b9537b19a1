#pragma once

namespace rydvmc {

inline constexpr const char* kToolName = "rydvmc";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace rydvmc
