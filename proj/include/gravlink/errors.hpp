#pragma once

#include <stdexcept>
#include <string>

namespace gravlink {

// Argument outside the mathematical domain (superluminal boost, d <= 0, gamma < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Field evaluated on top of its own source.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative method failed to converge within its budget.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Truncated Hilbert space larger than the configured budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a precondition (non-symmetric input, unnormalized state, non-Hermitian H).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gravlink
