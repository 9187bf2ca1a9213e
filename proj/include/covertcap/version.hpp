#pragma once

namespace covertcap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace covertcap
