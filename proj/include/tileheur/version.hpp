#pragma once

namespace tileheur {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tileheur
