#pragma once

namespace sqkd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sqkd
