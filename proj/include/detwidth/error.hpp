#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace detwidth {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Raised when a Gram/moment matrix is numerically singular. `degree` is the
// first polynomial degree (or matrix size) at which orthogonalization failed.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, std::size_t degree)
      : Error(what), degree_(degree) {}
  std::size_t degree() const noexcept { return degree_; }

 private:
  std::size_t degree_;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

class ContourCollisionError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class OracleScaleError : public Error {
 public:
  using Error::Error;
};

}  // namespace detwidth
