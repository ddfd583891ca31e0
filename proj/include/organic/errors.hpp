#pragma once

#include <stdexcept>
#include <string>

namespace organic {

/// Base class for all typed errors thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Incompatible shapes (rows vs response length, vector dimensions, ...).
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

/// Design matrix cannot support the requested fit (too few rows, or
/// rank-deficient in strict mode).
struct DegenerateDesign : Error {
  explicit DegenerateDesign(const std::string& msg) : Error(msg) {}
};

/// An operation required records from a treatment arm that is absent.
struct EmptyArm : Error {
  explicit EmptyArm(const std::string& msg) : Error(msg) {}
};

/// A cell that receives positive weight in the identification sum has no
/// observations to estimate it from. The message names the offending cell.
struct IdentificationGap : Error {
  explicit IdentificationGap(const std::string& msg) : Error(msg) {}
};

/// More than the tolerated fraction of bootstrap replicates failed.
struct TooManyFailures : Error {
  explicit TooManyFailures(const std::string& msg) : Error(msg) {}
};

/// CSV header does not match the expected column layout.
struct MalformedHeader : Error {
  explicit MalformedHeader(const std::string& msg) : Error(msg) {}
};

/// A CSV or JSON value could not be parsed; names row and column.
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Dataset invariants are violated (non-binary treatment, NaN, ...).
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// An argument is outside its documented domain.
struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

}  // namespace organic
