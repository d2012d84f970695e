#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace holoq {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Evaluation requested inside a function's singular set.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Principal logarithm on the closed negative real axis.
class BranchCutError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// A finite-difference stencil point hit a singularity.
class StencilError : public Error {
  public:
    using Error::Error;
};

/// An operation's stated precondition was violated by the caller.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// Operation not defined for raw-mode expression trees.
class UnsupportedNodeError : public Error {
  public:
    using Error::Error;
};

/// Pure-numeric differentiation requested beyond the supported order.
class UnsupportedOrderError : public Error {
  public:
    using Error::Error;
};

/// Byte range into the source text of a parse diagnostic.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
};

class ParseError : public Error {
  public:
    ParseError(Span span, const std::string& message) : Error(message), span_(span) {}
    Span span() const { return span_; }

  private:
    Span span_;
};

class SyntaxError : public ParseError {
  public:
    using ParseError::ParseError;
};

class NonIntegerExponentError : public ParseError {
  public:
    using ParseError::ParseError;
};

class UnknownIdentifierError : public ParseError {
  public:
    using ParseError::ParseError;
};

}  // namespace holoq
