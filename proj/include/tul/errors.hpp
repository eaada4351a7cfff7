#pragma once

#include <stdexcept>
#include <string>

namespace tul {

/// Bad configuration or usage; CLI exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unusable or inconsistent input data; CLI exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Training failure (divergence etc.); CLI exit code 3.
struct TrainError : std::runtime_error {
  explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tul
