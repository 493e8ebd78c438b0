#pragma once

namespace seal {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace seal
