#pragma once

#include <stdexcept>
#include <string>

namespace ncm {

/// Malformed input: bad spec fields, out-of-range words, invalid parameters.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested word lies beyond the moment budget of a measure.
class BudgetError : public SpecError {
 public:
  using SpecError::SpecError;
};

/// Evaluation point outside the open row ball.
class DomainError : public SpecError {
 public:
  using SpecError::SpecError;
};

/// Numerical validation failure (PSD check, degenerate mass, ordering).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant did not hold after a computation finished.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ncm
