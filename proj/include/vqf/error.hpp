#pragma once

#include <stdexcept>
#include <string>

namespace vqf {

/// Malformed or dimensionally inconsistent input.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed to produce a usable answer (iteration caps,
/// degenerate pivots).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vqf
