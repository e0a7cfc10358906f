#pragma once

namespace relmech {
inline constexpr const char* kVersion = "0.1.0";
}
