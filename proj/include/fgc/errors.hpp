#pragma once

#include <stdexcept>
#include <string>

namespace fgc {

// Error categories map onto CLI exit codes: validation -> 2, I/O -> 3,
// internal invariant breach -> 4.

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace fgc
