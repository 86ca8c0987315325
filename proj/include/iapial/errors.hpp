#pragma once

#include <stdexcept>
#include <string>

namespace iapial {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent dimensions or malformed data.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A standing assumption on the problem (Slater point, curvature ordering, ...) is violated.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

// Bad scalar argument (nonpositive step, sigma out of range, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A proven inequality failed at runtime beyond roundoff tolerance.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// An iteration counter exceeded its contractual bound.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

// Unreadable file or malformed problem/spec/summary document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace iapial
