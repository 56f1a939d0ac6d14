#pragma once

namespace nykpca {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nykpca
