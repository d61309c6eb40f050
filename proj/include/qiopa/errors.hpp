#pragma once

#include <stdexcept>
#include <string>

namespace qiopa {

/// Base class for failures of the numerics themselves (as opposed to bad
/// arguments, which throw std::invalid_argument).
class NumericFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An occupation number would exceed the register's declared cutoff.
class TruncationFault : public NumericFault {
 public:
  using NumericFault::NumericFault;
};

/// A matrix that must be positive semidefinite has an eigenvalue below the
/// clamping tolerance.
class PositivityFault : public NumericFault {
 public:
  using NumericFault::NumericFault;
};

/// Postselection kept nothing (zero success probability).
class PostselectionFailure : public NumericFault {
 public:
  using NumericFault::NumericFault;
};

}  // namespace qiopa
