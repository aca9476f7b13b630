#pragma once

#include <stdexcept>
#include <string>

namespace drinfeld {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unparsable strings, invalid field parameters, bad JSON.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition does not hold (zero where nonzero is
/// required, non-monic module, reducible modulus, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iteration or size budget ran out before a certificate was found.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace drinfeld
