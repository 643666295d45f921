#pragma once

#include <stdexcept>
#include <string>

namespace cpgenus {

// Raised when an input is outside the mathematical domain of an operation
// (wrong prime, malformed matrix, constraint violation, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal consistency check fails. This signals a bug or an
// input that is not what it claims to be (e.g. not a ZG-lattice).
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace cpgenus

#define CPGENUS_CHECK(cond, msg)                                              \
  do {                                                                        \
    if (!(cond))                                                              \
      throw ::cpgenus::InvariantError(std::string(__FILE__) + ":" +           \
                                      std::to_string(__LINE__) + ": " + msg); \
  } while (0)
