#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fdw {

/// Failure classes reported by the numerical routines. The CLI maps
/// `Validation` to exit code 2 and every other kind to exit code 3.
enum class ErrorKind {
  Validation,
  NonConvergence,
  AsymptoticDivergence,
  GridTooCoarse,
  IndexSearchExhausted,
  QuadratureNotConverged,
  IllConditioned,
  ExponentCollision,
  InadmissibleAlpha,
  DegeneratePoint,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown when an input violates a documented invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::Validation, what) {}
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  if (kind == ErrorKind::Validation) throw ValidationError(what);
  throw Error(kind, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw ValidationError(what);
}

}  // namespace fdw
