#pragma once

#include <stdexcept>
#include <string>

namespace specshift {

// Error taxonomy shared with the C API status codes.
enum class Errc {
  invalid_argument = 1,
  not_hermitian,
  parse,
  unsupported,
  pole_proximity,
  step_size,
  enlarge_truncation,
  budget_exceeded,
  convergence,
  inconsistency,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace specshift
