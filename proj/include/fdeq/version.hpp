#pragma once

namespace fdeq {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kJsonSchema = "fermi-equilibria/1";

} // namespace fdeq
