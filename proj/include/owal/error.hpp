#pragma once

#include <stdexcept>
#include <string>

namespace owal {

// Malformed or inconsistent external input (dumps, catalogs, id lists).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid experiment configuration (bad key, bad value, infeasible budget).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace owal
