#pragma once

namespace hemoswarm {

inline constexpr const char* tool_version = "1.0.0";

}  // namespace hemoswarm
