#pragma once

namespace supercong {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace supercong
