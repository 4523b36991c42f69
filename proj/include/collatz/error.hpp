#pragma once

#include <stdexcept>
#include <string>

namespace collatz {

// Raised when an argument lies outside an operation's mathematical domain
// (n = 0, inadmissible map, malformed word, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace collatz

namespace collatz {

// Raised when a quantity cannot be determined because iteration limits were
// exhausted (a trajectory that did not reach 1 within the configured bounds).
class LimitExceeded : public std::runtime_error {
 public:
  explicit LimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace collatz
