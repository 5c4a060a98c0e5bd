#pragma once

#include <stdexcept>
#include <string>

namespace cdk {

// Base class of all failures raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// The second derivative of an external field fails the positivity grid check.
struct ConvexityViolation : Error {
  using Error::Error;
};

// The field does not grow at the unbounded ends of its interval.
struct NonConfining : Error {
  using Error::Error;
};

// Argument outside the domain an operation is defined (or certified) on.
struct DomainError : Error {
  using Error::Error;
};

// An iteration or a self-convergence check did not settle.
struct NoConvergence : Error {
  using Error::Error;
};

// The endpoint solver left the interior of the interval (hard-edge situation).
struct EndpointEscape : Error {
  using Error::Error;
};

// A spectral approximation could not be resolved at the requested order.
struct ResolutionError : Error {
  using Error::Error;
};

// A quantity that must be strictly positive was not.
struct PositivityError : Error {
  using Error::Error;
};

// Discretization grid too coarse: doubling it moved the result.
struct GridTooCoarse : Error {
  using Error::Error;
};

// A weight-tail truncation bound could not be met.
struct TailError : Error {
  using Error::Error;
};

// Scaling parameter outside the admissible range of an asymptotic regime.
struct RangeError : Error {
  using Error::Error;
};

// Kernel arguments fall in different asymptotic regimes.
struct MixedRegime : Error {
  using Error::Error;
};

// A point could not be assigned to any regime (should be impossible).
struct RegimeGap : Error {
  using Error::Error;
};

}  // namespace cdk
