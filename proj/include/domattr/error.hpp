#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace domattr {

/// Failure categories. The CLI maps each one to a stable exit code and tag.
enum class ErrorCategory {
  invalid_argument,
  all_zero_sample,
  undefined_cell,
  unsupported_regime,
  no_root,
  io,
  config,
};

constexpr std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::all_zero_sample: return "all_zero_sample";
    case ErrorCategory::undefined_cell: return "undefined_cell";
    case ErrorCategory::unsupported_regime: return "unsupported_regime";
    case ErrorCategory::no_root: return "no_root";
    case ErrorCategory::io: return "io";
    case ErrorCategory::config: return "config";
  }
  return "unknown";
}

constexpr int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::invalid_argument: return 2;
    case ErrorCategory::config: return 2;
    case ErrorCategory::all_zero_sample: return 3;
    case ErrorCategory::undefined_cell: return 4;
    case ErrorCategory::unsupported_regime: return 5;
    case ErrorCategory::no_root: return 6;
    case ErrorCategory::io: return 7;
  }
  return 1;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCategory::invalid_argument, what);
}

}  // namespace domattr
