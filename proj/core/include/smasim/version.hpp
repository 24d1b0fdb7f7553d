#pragma once

namespace smasim {

inline constexpr const char* kToolVersion = "0.1.0";

}
