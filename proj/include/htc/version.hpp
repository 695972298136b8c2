#pragma once

namespace htc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace htc
