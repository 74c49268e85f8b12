#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfm/eg_solver.hpp"
#include "cfm/market.hpp"

namespace cfm {

enum class FixedPointStatus { converged, max_iter, solver_failure, oscillating };

std::string_view to_string(FixedPointStatus s) noexcept;

/// What one inner solve produced.
struct DualSummary {
  PriceVector p;
  /// q_i = sum_t r_it
  std::vector<double> q;
  double objective = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  std::size_t solver_iterations = 0;
  /// Largest residual reported by kkt_residuals on the solve's output.
  double kkt = 0.0;
};

struct FixedPointTrace {
  /// iterates[k] is the lambda fed to solve k + 1.
  std::vector<std::vector<double>> iterates;
  std::vector<double> residuals;
  std::vector<DualSummary> duals;
  FixedPointStatus status = FixedPointStatus::max_iter;
  /// Set on solver_failure: the 1-based iteration and the reason.
  std::size_t failed_iteration = 0;
  std::string message;
};

struct FixedPointOptions {
  double eps = 1e-6;
  std::size_t max_iter = 500;
  /// Stop as oscillating when the residual has not decreased over this many
  /// iterations.
  std::size_t window = 10;
  SolveOptions solver;
};

struct FixedPointResult {
  /// The lambda of the last successful solve.
  std::vector<double> lambda;
  PriceVector p;
  Allocation x;
  DualBundle duals;
  SolveStats stats;
  FixedPointTrace trace;
};

/// lambda <- 0; solve; q <- sum_t r; while ||lambda - q|| > eps:
/// lambda <- q; solve; q <- sum_t r.
FixedPointResult run_fixed_point(const MarketInstance& inst, const FixedPointOptions& opts = {});

/// Euclidean norm of lambda - q. Throws Errc::dimension_mismatch.
double fixed_point_residual(std::span<const double> lambda, std::span<const double> q);
/// Same with q_i = sum_t r(i, t).
double fixed_point_residual(std::span<const double> lambda, const Matrix& r);

std::vector<double> row_sums(const Matrix& r);

/// Columns iter, residual, lambda_1..lambda_n; one row per iteration.
std::string trace_csv(const FixedPointTrace& trace);

}  // namespace cfm
