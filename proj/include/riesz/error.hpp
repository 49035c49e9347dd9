#pragma once

#include <stdexcept>
#include <string>

namespace riesz {

enum class Errc {
  invalid_argument,
  invalid_dimension,
  unsupported_dimension,
  invalid_kernel,
  singular,
  non_convergence,
  precondition,
  infeasible,
  resource,
  io,
};

const char* to_string(Errc code);

/// Single exception type for the library; `code()` lets callers (the CLI in
/// particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace riesz
