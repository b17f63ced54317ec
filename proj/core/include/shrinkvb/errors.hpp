#pragma once

#include <stdexcept>
#include <string>

namespace shrinkvb {

/// Invalid argument or violated precondition (bad dimensions, out-of-range
/// parameters, malformed data).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation produced a non-finite value or a matrix lost positive
/// definiteness during fitting.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Unknown model name, conflicting options, or other caller mistakes at the
/// command-line surface.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// File could not be read, written, or parsed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shrinkvb
