#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kzp {

enum class ErrorKind {
  ZeroInverse,
  NotPrime,
  FieldMismatch,
  FieldTooLarge,
  IndexOutOfRange,
  IndexError,
  LengthMismatch,
  PrecisionExceeded,
  DegreeGuard,
  RationalH,
  PointNotInS,
  NotEtale,
  DegenerateCase,
  TruncationTooSmall,
  LinkageError,
  PDividesN,
  NotApplicable,
  InvalidArgument,
  Config,
};

std::string_view to_string(ErrorKind k);

// Single exception type; the kind is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace kzp
