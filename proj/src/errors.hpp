#pragma once

#include <stdexcept>
#include <string>

namespace kw {

/// Error categories exposed verbatim through the C API.
enum class ErrorCode {
  invalid_argument,
  grid_mismatch,
  hypothesis,
  incompatible_rhs,
  no_convergence,
  overflow,
  io,
  barrier,
  monotonicity,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace kw
