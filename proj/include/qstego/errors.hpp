#pragma once

#include <stdexcept>
#include <string>

namespace qstego {

/// Invalid arguments or parameters outside an operation's domain.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Enumeration would exceed the configured cap; sampling-based operations still work.
class CapacityError : public DomainError {
  public:
    using DomainError::DomainError;
};

class KeyUnderflowError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Error string lies in an admitted class but outside the keyed subset.
class NotACodewordError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Error string's weight vector is not an admitted class.
class AtypicalStringError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// An internal consistency check failed; indicates a bug rather than bad input.
class IntegrityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qstego
