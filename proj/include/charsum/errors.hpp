#pragma once

#include <stdexcept>
#include <string>

namespace charsum {

// Caller supplied arguments outside an operation's domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A table or buffer would exceed the configured memory cap.
class MemoryCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature hit its panel limit before reaching the tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed binary series dump.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace charsum
