#pragma once

// RAII wrappers over the C API handles plus the CLI error type carrying the
// process exit code (0 success, 1 hypothesis failure, 2 input error,
// 3 non-convergence, 4 verification failure).

#include <kw/kw.h>

#include <stdexcept>
#include <string>

namespace kwcli {

enum ExitCode {
  kExitOk = 0,
  kExitHypothesis = 1,
  kExitInput = 2,
  kExitNoConvergence = 3,
  kExitVerification = 4,
};

struct CliError : std::runtime_error {
  int exit_code;
  CliError(int code, const std::string& msg)
      : std::runtime_error(msg), exit_code(code) {}
};

inline void check(kw_status st, int exit_code_on_error = kExitInput) {
  if (st != KW_OK)
    throw CliError(exit_code_on_error, std::string(kw_status_name(st)) + ": " +
                                           kw_last_error_message());
}

template <class T, void (*Release)(T*)>
class Handle {
 public:
  Handle() = default;
  explicit Handle(T* p) : p_(p) {}
  ~Handle() { reset(); }
  Handle(Handle&& o) noexcept : p_(o.p_) { o.p_ = nullptr; }
  Handle& operator=(Handle&& o) noexcept {
    if (this != &o) {
      reset();
      p_ = o.p_;
      o.p_ = nullptr;
    }
    return *this;
  }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;

  T* get() const { return p_; }
  /// For out-parameters: releases any held handle first.
  T** out() {
    reset();
    return &p_;
  }
  explicit operator bool() const { return p_ != nullptr; }
  void reset() {
    if (p_ != nullptr) Release(p_);
    p_ = nullptr;
  }

 private:
  T* p_ = nullptr;
};

using Grid = Handle<kw_grid, kw_grid_release>;
using Field = Handle<kw_field, kw_field_release>;
using Drift = Handle<kw_drift, kw_drift_release>;
using Problem = Handle<kw_problem, kw_problem_release>;
using FlowResult = Handle<kw_flow_result, kw_flow_result_release>;
using UpperLower = Handle<kw_upper_lower, kw_upper_lower_release>;

}  // namespace kwcli
