#pragma once

namespace solsim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kVersionString = "solsim 0.1.0";

}  // namespace solsim
