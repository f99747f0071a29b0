#pragma once

#include <stdexcept>
#include <string>

namespace wheelbounds {

// Base class for all library errors. kind() tells a caller whether the
// failure came from rejected input or from a numerical routine.
class Error : public std::runtime_error {
public:
  enum class Kind { validation, internal };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(Kind::validation, what) {}
};

class InternalError : public Error {
public:
  explicit InternalError(const std::string& what) : Error(Kind::internal, what) {}
};

// Rejected input.
struct NonPositiveError : ValidationError { using ValidationError::ValidationError; };
struct UnorderedError : ValidationError { using ValidationError::ValidationError; };
struct OutOfSimplexError : ValidationError { using ValidationError::ValidationError; };
struct DegenerateError : ValidationError { using ValidationError::ValidationError; };
struct InfeasibleFractionsError : ValidationError { using ValidationError::ValidationError; };
struct BadModuliError : ValidationError { using ValidationError::ValidationError; };
struct BadContrastError : ValidationError { using ValidationError::ValidationError; };
struct ResolutionTooCoarseError : ValidationError { using ValidationError::ValidationError; };
struct ConeViolationError : ValidationError { using ValidationError::ValidationError; };
struct RegimeMismatchError : ValidationError { using ValidationError::ValidationError; };

// Numerical failure.
struct SingularProfileError : InternalError { using InternalError::InternalError; };
struct NoConvergenceError : InternalError { using InternalError::InternalError; };
struct IllConditionedFitError : InternalError { using InternalError::InternalError; };

} // namespace wheelbounds
