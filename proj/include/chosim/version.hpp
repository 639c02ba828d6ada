#pragma once

namespace chosim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chosim
