#pragma once

#include <stdexcept>
#include <string>

namespace curvgraph {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// usage/parse/domain problems -> 2, resource limits -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: unknown vertex, function not defined where required,
// violated operation precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; message carries position information when known.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A configured budget (ball vertex budget, search node budget) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Solver failed to converge, or a numeric sanity assertion broke.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Dirichlet problem with an interior component that never meets the boundary.
class IllPosedError : public Error {
 public:
  using Error::Error;
};

// An internal invariant is broken (e.g. a generator returned an asymmetric
// neighbor relation). Indicates a bug, not user error.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvgraph
