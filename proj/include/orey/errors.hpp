#pragma once

#include <stdexcept>
#include <string>

namespace orey {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the function's domain (time outside [0,T], bad parameter).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A computed quantity violated a mathematical invariant beyond rounding.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Orey index / normalizing constant requested from a model that has none.
class MissingMetadataError : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  using Error::Error;
};

// Malformed path CSV or model specification string.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Input has no second-order variation (e.g. an affine path).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Series cannot reach the requested tolerance within the truncation cap.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace orey
