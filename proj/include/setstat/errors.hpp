#pragma once

#include <stdexcept>
#include <string>

namespace setstat {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two operands live in spaces of different dimension.
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// The operation has no implementation for this representation/dimension.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Kernel regression query point has zero kernel mass.
class NoLocalData : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap before reaching tolerance.
class SolverCapHit : public Error {
 public:
  using Error::Error;
};

/// An identity that holds mathematically failed numerically.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// An expectation law cannot be evaluated for the supplied models.
class LawNotComputable : public Error {
 public:
  using Error::Error;
};

inline void require_same_dim(long a, long b, const char* where) {
  if (a != b) {
    throw DimensionMismatch(std::string(where) + ": dimension mismatch (" +
                            std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace setstat
