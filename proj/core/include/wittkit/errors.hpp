#pragma once

#include <stdexcept>
#include <string>

namespace wittkit {

/// Base class of every error raised by the library. The `kind()` string is
/// stable and used verbatim in CLI reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define WITTKIT_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
  };

WITTKIT_DEFINE_ERROR(ExponentLevelMismatch)
WITTKIT_DEFINE_ERROR(InexactDivision)
WITTKIT_DEFINE_ERROR(IntegralityFailure)
WITTKIT_DEFINE_ERROR(LengthMismatch)
WITTKIT_DEFINE_ERROR(InvalidSpec)
WITTKIT_DEFINE_ERROR(InvalidAlgebra)
WITTKIT_DEFINE_ERROR(NotFiniteDimensional)
WITTKIT_DEFINE_ERROR(NoRootAtTruncation)
WITTKIT_DEFINE_ERROR(CannotExtend)
WITTKIT_DEFINE_ERROR(UnitCheckFailed)
WITTKIT_DEFINE_ERROR(NoWitness)
WITTKIT_DEFINE_ERROR(PreconditionViolation)
WITTKIT_DEFINE_ERROR(RelationNotVerified)
WITTKIT_DEFINE_ERROR(AlmostCMViolation)
WITTKIT_DEFINE_ERROR(NotMonic)
WITTKIT_DEFINE_ERROR(CapExceeded)
WITTKIT_DEFINE_ERROR(UnknownReference)

#undef WITTKIT_DEFINE_ERROR

/// Parse errors carry a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, int line, int column)
      : Error("SyntaxError", std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace wittkit
