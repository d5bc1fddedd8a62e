#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psdrank {

// Machine-readable failure categories; the CLI prints code_name() on its
// diagnostics stream.
enum class ErrorCode {
  parse,
  unknown_variable,
  missing_binding,
  zero_polynomial,
  precondition,
  out_of_range,
  dimension_mismatch,
  label_mismatch,
  unsatisfied,
  singular_basis,
  vanishing_coordinate,
  residual,
  rank_deficient,
  io,
};

std::string_view code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace psdrank
