#pragma once

namespace fgc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fgc
