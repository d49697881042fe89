#pragma once

namespace shs {

inline constexpr char kVersion[] = "0.1.0";

} // namespace shs
