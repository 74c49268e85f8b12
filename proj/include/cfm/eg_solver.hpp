#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cfm/market.hpp"

namespace cfm {

enum class SolveStatus { converged, max_iter, infeasible, degenerate_tight };

std::string_view to_string(SolveStatus s) noexcept;

/// converged or degenerate_tight (a converged solve on an instance with
/// degenerate-tight types).
inline bool solved(SolveStatus s) noexcept {
  return s == SolveStatus::converged || s == SolveStatus::degenerate_tight;
}

struct DualBundle {
  PriceVector p;
  /// r(i, t); zero where agent i does not participate in type t.
  Matrix r;
  /// r before the degenerate-type normalization.
  Matrix r_raw;
  /// Per type: amount subtracted from every r(i, t) and added to every p_j
  /// of the type. Nonzero only on degenerate-tight types, where
  /// (p_j + d, r_it - d) is a family of equally valid duals; the returned
  /// member has min_i r(i, t) = 0.
  std::vector<double> gauge_shift;
  /// s(i, j) <= 0, multipliers of x >= 0.
  Matrix s;
  double objective = 0.0;
  /// Goods whose capacity dual came out below -tol.
  std::vector<std::size_t> negative_prices;
};

struct SolveStats {
  std::size_t iterations = 0;
  double stationarity_residual = 0.0;
  double primal_feasibility_residual = 0.0;
  double complementarity_residual = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  std::vector<std::size_t> degenerate_types;
};

struct SolveResult {
  Allocation x;
  DualBundle duals;
  SolveStats stats;
};

struct SolveOptions {
  double tol = 1e-8;
  std::size_t max_iter = 200;
};

/// Maximizes sum_i (w_i + lambda_i) log(sum_j u_ij x_ij) subject to
/// sum_i x_ij = cap_j, the per-agent type caps and x >= 0, with a
/// primal-dual interior-point method.
///
/// Throws Errc::validation_failed on an invalid instance,
/// Errc::dimension_mismatch / Errc::invalid_argument on a bad lambda and
/// Errc::log_domain when an agent ends with zero utility. Capacity
/// infeasibility is reported as SolveStatus::infeasible.
SolveResult solve_bpsop(const MarketInstance& inst, std::span<const double> lambda,
                        const SolveOptions& opts = {});

/// solve_bpsop with lambda = 0.
SolveResult solve_sop1(const MarketInstance& inst, const SolveOptions& opts = {});

struct KktReport {
  /// max over (i, j) of max(0, g_ij - p_j - sum_t r_it [j in t]), where
  /// g_ij = (w_i + lambda_i) u_ij / U_i
  double stationarity = 0.0;
  /// max of |x_ij (g_ij - p_j - ...)| and |r_it (1 - sum_{j in t} x_ij)|
  double complementarity = 0.0;
  /// capacity equalities, type caps and x >= 0
  double primal_feasibility = 0.0;
  /// max(0, -r_it)
  double dual_feasibility = 0.0;

  double max() const noexcept;
};

/// Recomputes the optimality conditions from scratch for any (x, p, r).
/// Throws Errc::log_domain naming an agent with zero utility.
KktReport kkt_residuals(const MarketInstance& inst, std::span<const double> lambda,
                        const Allocation& x, const PriceVector& p, const Matrix& r);

/// Objective value sum_i (w_i + lambda_i) log U_i.
double bpsop_objective(const MarketInstance& inst, std::span<const double> lambda,
                       const Allocation& x);

}  // namespace cfm
