#pragma once

#include <string>

namespace owal::io {

// Locale-independent float formatting. full17 renders 17 significant digits
// (bit-faithful round trips for dump files); the default renders the shortest
// representation that parses back to the same double.
std::string format_double(double value, bool full17 = false);

std::string format_long(long value);
std::string format_int(int value);

}  // namespace owal::io
