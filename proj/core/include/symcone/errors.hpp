/** @file
 *  @brief Exception types shared by every module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace symcone {

/// Argument outside the mathematical domain (non-cone point, pole of Γ, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operands belong to different algebras or have the wrong length.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quadrature did not reach its tolerance or its tail did not decay.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A complexified minor vanished on the continuation path.
class BranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lattice or coefficient index out of range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace symcone
