#pragma once

namespace osculant {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace osculant
