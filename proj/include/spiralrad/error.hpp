#pragma once

#include <stdexcept>
#include <string>

namespace spiralrad {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the regime where a family or order is defined.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A series needed more terms than the hard cap allows at the requested point.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// The real-axis zero scan ran out of budget or met an ill-conditioned zero.
class ScanError : public Error {
 public:
  using Error::Error;
};

/// Root equation has no admissible root in its bracket.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Boundary sampling requested outside the region where the log-derivative is analytic.
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace spiralrad
