#pragma once

#include <stdexcept>
#include <string>

namespace jpmcount {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or inconsistent dimensions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Population reached the top of a truncated Fock space.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Integrator or root-finder failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A model is evaluated outside its domain of validity.
class ValidityError : public Error {
 public:
  using Error::Error;
};

}  // namespace jpmcount
