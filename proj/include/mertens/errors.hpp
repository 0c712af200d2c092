#pragma once

#include <stdexcept>
#include <string>

namespace mertens {

// Raised when an elliptic curve quantity is requested at a prime of bad
// reduction (p | discriminant, or p in {2, 3}).
class BadReductionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An exact division that must be exact was not. Indicates a bug.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// No closed-form prediction or deviation formula exists for the variety.
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mertens
