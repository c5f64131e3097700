#pragma once

namespace vargc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vargc
