#pragma once

#include <stdexcept>
#include <string>

namespace zcp {

/// Root of the library's exception hierarchy. Each subclass maps onto one
/// CLI exit code (see tools/zcp.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied input violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (module spec grammar, vector lists, flags).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed a post-hoc check. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// The lattice handed to the invariant-basis search has a cyclotomic summand.
class NotNonCyclotomic : public Error {
 public:
  using Error::Error;
};

/// Bounded search ran out of candidates or stabilization rounds.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

#define ZCP_CHECK(cond, msg)                                            \
  do {                                                                  \
    if (!(cond)) throw ::zcp::InternalError(std::string(__func__) + ": " + (msg)); \
  } while (0)

}  // namespace zcp
