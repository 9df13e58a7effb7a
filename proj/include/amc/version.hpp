#pragma once

#include <string_view>

namespace amc {
inline constexpr std::string_view kVersion = "1.0.0";
}
