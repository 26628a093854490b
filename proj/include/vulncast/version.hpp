#pragma once

namespace vulncast {

inline constexpr const char* kVersion = "0.1.0";

} // namespace vulncast
