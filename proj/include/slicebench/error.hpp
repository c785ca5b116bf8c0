#pragma once

#include <stdexcept>
#include <string>

namespace slicebench {

// Bad configuration or invalid input documents. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem and parse failures on artifacts. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slicebench
