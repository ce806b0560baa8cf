#pragma once

namespace shb {

inline constexpr const char* version = "0.1.0";

}  // namespace shb
