#pragma once

namespace cdk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cdk
