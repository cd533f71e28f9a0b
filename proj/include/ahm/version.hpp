#pragma once

namespace ahm {
inline constexpr const char* kVersion = "0.1.0";
}
