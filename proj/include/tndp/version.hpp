#pragma once

namespace tndp {

inline constexpr const char* kVersion = "tndp 0.1.0";

}  // namespace tndp
