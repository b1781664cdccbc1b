#pragma once

namespace widom {

inline constexpr const char* kToolkitName = "widom";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace widom
