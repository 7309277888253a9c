#pragma once

namespace hud {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hud
