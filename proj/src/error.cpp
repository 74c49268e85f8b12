#include "cfm/error.hpp"

namespace cfm {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::parse_error: return "parse-error";
    case Errc::validation_failed: return "validation-failed";
    case Errc::unknown_name: return "unknown-name";
    case Errc::infeasible: return "infeasible";
    case Errc::unbounded_demand: return "unbounded-demand";
    case Errc::log_domain: return "log-domain";
    case Errc::not_at_fixed_point: return "not-at-fixed-point";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::grid_too_large: return "grid-too-large";
    case Errc::io_error: return "io-error";
    case Errc::solver_failure: return "solver-failure";
  }
  return "unknown";
}

}  // namespace cfm
