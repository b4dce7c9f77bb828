#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace greenquad {

enum class errc {
  invalid_argument,
  degenerate_direction,
  range,
  singular_point,
  invalid_state,
  kernel_present,
  unsupported_operator,
  parse,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::degenerate_direction: return "degenerate-direction";
    case errc::range: return "range";
    case errc::singular_point: return "singular-point";
    case errc::invalid_state: return "invalid-state";
    case errc::kernel_present: return "kernel-present";
    case errc::unsupported_operator: return "unsupported-operator";
    case errc::parse: return "parse";
  }
  return "unknown";
}

// Single exception type for the library; callers dispatch on code().
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const char* what) {
  if (!cond) fail(code, what);
}

}  // namespace greenquad
