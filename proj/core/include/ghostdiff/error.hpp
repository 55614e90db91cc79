#pragma once

#include <stdexcept>
#include <string>

namespace ghostdiff {

enum class ErrorKind {
  invalid_argument,
  grid_mismatch,
  off_grid,
  unresolved_kernel,
  sweep_out_of_band,
  dark_mode,
  io,
};

/// Error raised by the simulation core. The message starts with a short,
/// stable tag ("unresolved kernel", "dark mode", ...) so callers and tests
/// can match on it; `kind()` carries the same information in typed form.
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

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::invalid_argument, what);
}

}  // namespace ghostdiff
