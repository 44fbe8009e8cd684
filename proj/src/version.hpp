#pragma once

namespace telegraph {

inline constexpr const char* kVersion = "0.1.0";

}
