#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hqc {

enum class ErrorKind {
  invalid_input,
  precondition,
  insufficient_data,
  resource_limit,
  numerical_failure,
  integrator_instability,
  usage,
};

/// Single exception type for the library; `kind()` tells callers (and the
/// CLI's exit-code mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::precondition: return "precondition violated";
    case ErrorKind::insufficient_data: return "insufficient data";
    case ErrorKind::resource_limit: return "resource limit";
    case ErrorKind::numerical_failure: return "numerical failure";
    case ErrorKind::integrator_instability: return "integrator instability";
    case ErrorKind::usage: return "usage error";
  }
  return "error";
}

/// CLI exit codes: 2 usage/validation, 3 numerical failure, 4 resource limit.
constexpr int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::numerical_failure:
    case ErrorKind::integrator_instability: return 3;
    case ErrorKind::resource_limit: return 4;
    default: return 2;
  }
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hqc
