#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zgunits {

enum class ErrorKind {
  NotASublattice,
  ConductorMismatch,
  NotCoprime,
  NotAUnit,
  PrecisionUnachievable,
  PrecisionExhausted,
  HalfPowerUndefined,
  BadParameters,
  EnumerationBoundExceeded,
  UnsupportedConductor,
  GroupMismatch,
  NotASubgroup,
  NotInImage,
  NotInSubgroup,
  ParseError,
  Internal,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace zgunits
