#pragma once

namespace nhskin {

inline constexpr const char* version_string = "0.1.0";

}
