#pragma once

namespace posebench {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace posebench
