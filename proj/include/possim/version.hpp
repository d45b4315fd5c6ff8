#pragma once

namespace possim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace possim
