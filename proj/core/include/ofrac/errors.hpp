#pragma once

#include <stdexcept>
#include <string>

namespace ofrac {

enum class ErrorKind {
  Validation,
  Bracket,
  NonFinite,
  DiagonalDivergence,
  TailDivergence,
  NotConverged,
  SingularityAtCriticalPoint,
  InsufficientDecades,
  TouchViolation,
  MaxIterations,
  NonMonotoneSource,
  Schema,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base class for every failure raised by the library. The kind tag is what
/// the CLI maps to exit codes and what tests match on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define OFRAC_DEFINE_ERROR(Name)                          \
  class Name : public Error {                             \
   public:                                                \
    explicit Name(const std::string& what)                \
        : Error(ErrorKind::Name, what) {}                 \
  }

OFRAC_DEFINE_ERROR(Validation);
OFRAC_DEFINE_ERROR(Bracket);
OFRAC_DEFINE_ERROR(NonFinite);
OFRAC_DEFINE_ERROR(DiagonalDivergence);
OFRAC_DEFINE_ERROR(TailDivergence);
OFRAC_DEFINE_ERROR(NotConverged);
OFRAC_DEFINE_ERROR(SingularityAtCriticalPoint);
OFRAC_DEFINE_ERROR(InsufficientDecades);
OFRAC_DEFINE_ERROR(TouchViolation);
OFRAC_DEFINE_ERROR(MaxIterations);
OFRAC_DEFINE_ERROR(NonMonotoneSource);
OFRAC_DEFINE_ERROR(Schema);

#undef OFRAC_DEFINE_ERROR

// Conventional aliases matching the error names used in reports.
using ValidationError = Validation;
using BracketError = Bracket;
using SchemaError = Schema;

}  // namespace ofrac
