#pragma once

#include <stdexcept>
#include <string>

namespace cliff {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inversion of a (para)vector whose norm is below the configured epsilon.
struct ZeroNormError : Error {
  using Error::Error;
};

/// A value expected to lie in the scalar+vector subspace carries a
/// grade-2/3 component above tolerance.  Indicates an arithmetic bug,
/// not a domain error.
struct GradeLeakError : Error {
  using Error::Error;
};

/// A multi-index of length zero was passed where |alpha| >= 1 is required.
struct EmptyIndexError : Error {
  using Error::Error;
};

/// 1 - lambda*x is singular in the generating-function check.
struct NotInvertibleError : Error {
  using Error::Error;
};

/// A planar lift was requested on the axis |vec(x)| = 0 with v(x0,0) != 0.
struct AxisSingularityError : Error {
  using Error::Error;
};

/// cotan evaluated where its sine factor is not invertible.
struct PoleOfCotanError : Error {
  using Error::Error;
};

/// Evaluation point within the configured guard radius of a lattice point.
struct NearPoleError : Error {
  using Error::Error;
};

/// A truncated series did not reach the target tolerance at max_shells.
struct UnconvergedError : Error {
  UnconvergedError(const std::string& what, double bound_, int shells_)
      : Error(what), bound(bound_), shells(shells_) {}
  double bound = 0.0;
  int shells = 0;
};

/// Requested radius (or power-series argument) outside the valid domain.
struct RadiusTooLargeError : Error {
  using Error::Error;
};

/// Multi-index has the wrong length for the requested family.
struct BadIndexError : Error {
  using Error::Error;
};

/// Periods supplied for a lattice are not linearly independent.
struct RankError : Error {
  using Error::Error;
};

}  // namespace cliff
