#pragma once

namespace icf {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace icf
