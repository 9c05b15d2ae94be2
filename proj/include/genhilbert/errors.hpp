#pragma once

#include <stdexcept>
#include <string>

namespace genhilbert {

/// Base for failures of a numerical procedure (as opposed to bad input).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature hit its refinement bound without meeting tolerance.
class NonConvergent : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Disk quadrature failed its refinement self-check.
class GridTooCoarse : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A truncated Taylor expansion drops more than the allowed tail.
class TruncationInsufficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tail of the measure vanishes on part of the requested grid.
class DegenerateTail : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters fall outside the hypotheses of the selected theorem case.
class InvalidCase : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace genhilbert
