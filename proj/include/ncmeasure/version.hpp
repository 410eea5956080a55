#pragma once

namespace ncm {

inline constexpr const char* version = "0.1.0";

}  // namespace ncm
