#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cfm/eg_solver.hpp"
#include "cfm/market.hpp"

namespace cfm {

struct Tolerances {
  double clearing = 1e-5;
  double budget = 1e-5;
  double opt = 1e-6;
};

struct EquilibriumReport {
  /// |sum_i x_ij - cap_j|
  std::vector<double> clearing_residuals;
  /// |sum_j p_j x_ij - w_i|
  std::vector<double> budget_residuals;
  /// greedy optimum utility minus the utility of x_i
  std::vector<double> optimality_gaps;
  /// sum_{j in t} x_ij for participating (i, t); NaN elsewhere
  Matrix type_sums;
  std::vector<std::string> feasibility_violations;
  Tolerances tol;
  bool pass = false;

  double max_clearing() const;
  double max_budget() const;
  double max_gap() const;
};

/// Checks that (p, x) clears every good, exhausts every budget and gives
/// each agent an optimal bundle. Only the instance is trusted: optimality is
/// measured against the greedy demand at p. Feasibility (x >= 0, type caps)
/// is checked at the clearing tolerance. Throws Errc::unbounded_demand
/// naming the agent, Errc::dimension_mismatch on shape errors.
EquilibriumReport check_equilibrium(const MarketInstance& inst, std::span<const double> p,
                                    const Allocation& x, const Tolerances& tol = {});

struct BudgetGapReport {
  /// w_i - sum_j p_j x_ij
  std::vector<double> gap;
  /// sum_t r_it
  std::vector<double> r_sum;
  /// |gap - r_sum|
  std::vector<double> identity_residual;
  double max_gap = 0.0;
  double max_identity_residual = 0.0;
  /// Some agent keeps unspent budget: the social optimum is not an
  /// equilibrium.
  bool witness = false;
  bool identity_holds = false;
  SolveResult solve;
};

/// Solves the unperturbed program and measures each agent's unspent budget.
/// Throws Errc::solver_failure when the solve does not converge.
BudgetGapReport sop1_budget_gap(const MarketInstance& inst, double tol = 1e-6,
                                const SolveOptions& opts = {});

struct CrosscheckReport {
  /// y_i = U_i / (w_i + lambda_i)
  std::vector<double> y;
  /// r~_it = y_i r_it
  Matrix r_tilde;
  double fixed_point_residual = 0.0;
  /// max(0, u_ij - y_i p_j - r~_it)
  double stationarity = 0.0;
  /// |x_ij (u_ij - y_i p_j - r~_it)| and |r~_it (1 - sum_{j in t} x_ij)|
  double complementarity = 0.0;
  /// |sum_j p_j x_ij - w_i|
  double budget = 0.0;
  /// negative y or r~, negative x, exceeded type caps
  double feasibility = 0.0;
  bool pass = false;

  double max() const noexcept;
};

/// Maps the program's duals at a fixed point onto multipliers of every
/// agent's individual problem and checks that problem's optimality
/// conditions. Throws Errc::not_at_fixed_point when
/// ||lambda - sum_t r|| > eps.
CrosscheckReport kkt_crosscheck(const MarketInstance& inst, std::span<const double> lambda,
                                const Allocation& x, const PriceVector& p, const Matrix& r,
                                double tol = 1e-6, double eps = 1e-6);

struct GridScanReport {
  double min_residual = 0.0;
  PriceVector argmin;
  std::size_t points = 0;
  /// Points skipped because demand was unbounded there.
  std::size_t skipped = 0;
  /// Prices with residual <= near_tol, in scan order.
  std::vector<PriceVector> near_clearing;
  double near_tol = 0.0;
  double step = 0.0;
  /// min_residual >= 10 * step.
  bool claims_nonexistence = false;
};

/// Residual of (p, greedy demand): max of clearing and budget residuals,
/// minimized over the two tie-break orders. +inf if demand is unbounded.
double grid_residual(const MarketInstance& inst, std::span<const double> p);

/// Scans p in {0, step, ..., p_max}^m for m <= 3. Throws
/// Errc::grid_too_large above 1e7 points and Errc::invalid_argument for
/// m > 3 or a non-positive step.
GridScanReport grid_nonexistence(const MarketInstance& inst, double p_max, double step,
                                 double near_tol = 1e-9);

/// Some good is untyped and every agent values every good.
bool existence_condition(const MarketInstance& inst);

}  // namespace cfm
