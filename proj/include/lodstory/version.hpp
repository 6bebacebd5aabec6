#pragma once

#include <string_view>

namespace lodstory {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kUserAgent = "lodstory/0.1.0";

}  // namespace lodstory
