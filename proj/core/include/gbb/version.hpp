#pragma once

namespace gbb {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gbb
