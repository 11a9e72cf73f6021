#pragma once

#include <stdexcept>
#include <string>

namespace onebit {

/// Raised when a computation cannot deliver its numerical contract
/// (failed factorization, quadrature budget exhausted, irrecoverable
/// ill-conditioning). Input validation errors use std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace onebit
