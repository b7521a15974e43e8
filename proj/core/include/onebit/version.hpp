#pragma once

#define ONEBIT_VERSION_MAJOR 0
#define ONEBIT_VERSION_MINOR 1
#define ONEBIT_VERSION_PATCH 0
#define ONEBIT_VERSION_STRING "0.1.0"

namespace onebit {

inline const char* version() { return ONEBIT_VERSION_STRING; }

}  // namespace onebit
