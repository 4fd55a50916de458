#pragma once

namespace rgl {
inline constexpr const char* kProjectName = "rglab";
inline constexpr const char* kProjectVersion = "0.1.0";
}  // namespace rgl
