#pragma once

namespace qrng {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qrng
