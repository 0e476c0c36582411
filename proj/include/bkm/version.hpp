#pragma once

namespace bkm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bkm
