#pragma once

#include <stdexcept>
#include <string>

namespace posebench {

// Bad user-supplied configuration (flags, parameter ranges). CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data (missing files, malformed content, contract violations
// in datasets or model payloads). CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed serialized input; carries the context of where parsing failed.
class ParseError : public DataError {
 public:
  explicit ParseError(const std::string& msg) : DataError(msg) {}
};

}  // namespace posebench
