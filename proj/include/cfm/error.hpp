#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cfm {

/// Failure categories raised by the library. The C API maps each one onto a
/// `cfm_status` code with the same name.
enum class Errc {
  invalid_argument = 1,
  parse_error,
  validation_failed,
  unknown_name,
  infeasible,
  unbounded_demand,
  log_domain,
  not_at_fixed_point,
  dimension_mismatch,
  grid_too_large,
  io_error,
  solver_failure,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cfm
