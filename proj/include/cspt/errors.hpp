#pragma once

#include <stdexcept>
#include <string>

namespace cspt {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Axis extents incompatible with the requested operation.
struct DimensionError : Error {
  using Error::Error;
};

/// Non-finite input or a numerically meaningless intermediate.
struct NumericError : Error {
  using Error::Error;
};

/// An iterative solver did not reach its tolerance within max_iter.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Requested problem size exceeds the dense-mode bounds.
struct CapacityError : Error {
  using Error::Error;
};

/// MPS transfer matrix has a degenerate dominant eigenvalue.
struct NonInjectiveError : Error {
  using Error::Error;
};

/// Two dominant eigenvalues of equal modulus; the requested pair is undefined.
struct DegenerateDominanceError : Error {
  using Error::Error;
};

/// <L|R> vanished; biorthogonal expectation values are undefined.
struct BiorthogonalityError : Error {
  using Error::Error;
};

/// All Schmidt weights on a bond fell below the purge floor.
struct StateCollapseError : Error {
  using Error::Error;
};

/// State is not invariant under the requested symmetry action.
struct NotSymmetricError : Error {
  using Error::Error;
};

/// Bad command-line usage or configuration input.
struct UsageError : Error {
  using Error::Error;
};

}  // namespace cspt
