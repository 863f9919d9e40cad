#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

// Base class for every error raised by the toolkit. The CLI maps
// PreconditionError and its subclasses to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SingularProduct : public Error {
 public:
  using Error::Error;
};

class DegenerateGap : public Error {
 public:
  using Error::Error;
};

class NotProximal : public Error {
 public:
  using Error::Error;
};

class NonDivergent : public Error {
 public:
  using Error::Error;
};

class SurfaceRadiusExceeded : public Error {
 public:
  using Error::Error;
};

class PingPongFailure : public Error {
 public:
  using Error::Error;
};

class OutOfBall : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class BoundaryDegenerate : public Error {
 public:
  using Error::Error;
};

class OrbitEscape : public Error {
 public:
  using Error::Error;
};

class ParseError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace anosov
