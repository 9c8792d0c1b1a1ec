#pragma once

#include <string_view>

namespace nightseg {

inline constexpr std::string_view kToolName = "nightseg";
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace nightseg
