#pragma once

namespace sfcapm {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sfcapm
