#pragma once

namespace mei {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mei
