#pragma once

#include <string_view>

namespace compkit {

inline constexpr std::string_view tool_name = "compkit";
inline constexpr std::string_view tool_version = "0.1.0";

}  // namespace compkit
