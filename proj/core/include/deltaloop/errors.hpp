#pragma once

#include <stdexcept>

namespace deltaloop {

// Argument outside the region where a formula is defined (log of a
// non-positive number, offset beyond the focal distance, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Hypothesis of an analytic statement does not hold, or an input object
// violates its invariants.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative procedure failed, or a computed quantity contradicts a proven
// property. Messages carry the diagnostics.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace deltaloop
