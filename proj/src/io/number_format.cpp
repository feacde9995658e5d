#include "owal/io/number_format.hpp"

#include <charconv>

namespace owal::io {

std::string format_double(double value, bool full17) {
  char buf[64];
  std::to_chars_result res =
      full17 ? std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17)
             : std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_long(long value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_int(int value) {
  char buf[16];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace owal::io
