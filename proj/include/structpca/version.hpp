#pragma once

namespace structpca {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace structpca
