#pragma once

namespace asep {

inline constexpr const char* kVersion = "0.3.0";

} // namespace asep
