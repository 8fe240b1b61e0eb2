#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skewnp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (zero alpha,
/// negative-order coefficient where an integral one is required, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Operands belong to different skew polynomial rings.
class ContextMismatch : public Error {
public:
  using Error::Error;
};

/// A result was requested beyond the precision carried by the inputs.
class PrecisionExhausted : public Error {
public:
  using Error::Error;
};

/// Inverting a series (or scalar) that is numerically zero.
class ZeroDivision : public Error {
public:
  using Error::Error;
};

/// An iterative numeric method did not converge.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// A budget (ramification, classical iterations) was exceeded.
class BudgetExceeded : public Error {
public:
  using Error::Error;
};

/// A mathematical obstruction: the requested object provably does not exist
/// (twist-coprimality failure, vanishing recursion coefficient, ...).
class MathObstruction : public Error {
public:
  using Error::Error;
};

/// An internal invariant failed; carries enough text to diagnose.
class InternalError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

}  // namespace skewnp
