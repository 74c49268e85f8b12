#include "cfm/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cfm/demand.hpp"
#include "cfm/error.hpp"
#include "cfm/fixed_point.hpp"

namespace cfm {

namespace {

double max_of(const std::vector<double>& v) {
  double out = 0.0;
  for (double e : v) out = std::max(out, e);
  return out;
}

}  // namespace

double EquilibriumReport::max_clearing() const { return max_of(clearing_residuals); }
double EquilibriumReport::max_budget() const { return max_of(budget_residuals); }
double EquilibriumReport::max_gap() const { return max_of(optimality_gaps); }

EquilibriumReport check_equilibrium(const MarketInstance& inst, std::span<const double> p,
                                    const Allocation& x, const Tolerances& tol) {
  const std::size_t n = inst.n_agents(), m = inst.n_goods(), T = inst.n_types();
  if (p.size() != m || x.rows() != n || x.cols() != m) {
    std::ostringstream msg;
    msg << "expected " << m << " prices and a " << n << "x" << m << " allocation, got "
        << p.size() << " prices and " << x.rows() << "x" << x.cols();
    throw Error(Errc::dimension_mismatch, msg.str());
  }
  EquilibriumReport rep;
  rep.tol = tol;
  rep.type_sums = Matrix(n, T, std::numeric_limits<double>::quiet_NaN());

  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x(i, j);
    rep.clearing_residuals.push_back(std::abs(sum - inst.capacity(j)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double spend = 0.0, utility = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      spend += p[j] * x(i, j);
      utility += inst.utility(i, j) * x(i, j);
      if (x(i, j) < -tol.clearing) {
        std::ostringstream msg;
        msg << "x[" << i + 1 << "][" << j + 1 << "] = " << x(i, j) << " is negative";
        rep.feasibility_violations.push_back(msg.str());
      }
    }
    rep.budget_residuals.push_back(std::abs(spend - inst.budget(i)));
    for (std::size_t t = 0; t < T; ++t) {
      if (!inst.participates(i, t)) continue;
      double sum = 0.0;
      for (std::size_t j : inst.type(t)) sum += x(i, j);
      rep.type_sums(i, t) = sum;
      if (sum > 1.0 + tol.clearing) {
        std::ostringstream msg;
        msg << "agent " << i + 1 << " holds " << sum << " units of type " << t + 1;
        rep.feasibility_violations.push_back(msg.str());
      }
    }
    DemandResult best;
    try {
      best = demand(inst, i, p);
    } catch (const Error& e) {
      if (e.code() != Errc::unbounded_demand) throw;
      throw Error(Errc::unbounded_demand, "agent " + std::to_string(i + 1) + ": " + e.what());
    }
    rep.optimality_gaps.push_back(best.utility - utility);
  }
  rep.pass = rep.feasibility_violations.empty() && rep.max_clearing() <= tol.clearing &&
             rep.max_budget() <= tol.budget && rep.max_gap() <= tol.opt;
  return rep;
}

BudgetGapReport sop1_budget_gap(const MarketInstance& inst, double tol, const SolveOptions& opts) {
  BudgetGapReport rep;
  rep.solve = solve_sop1(inst, opts);
  if (!solved(rep.solve.stats.status)) {
    throw Error(Errc::solver_failure,
                "solve ended with status " + std::string(to_string(rep.solve.stats.status)));
  }
  const auto& x = rep.solve.x;
  const auto& p = rep.solve.duals.p;
  rep.r_sum = row_sums(rep.solve.duals.r);
  for (std::size_t i = 0; i < inst.n_agents(); ++i) {
    double spend = 0.0;
    for (std::size_t j = 0; j < inst.n_goods(); ++j) spend += p[j] * x(i, j);
    const double gap = inst.budget(i) - spend;
    rep.gap.push_back(gap);
    rep.identity_residual.push_back(std::abs(gap - rep.r_sum[i]));
    rep.max_gap = std::max(rep.max_gap, gap);
    rep.max_identity_residual = std::max(rep.max_identity_residual, rep.identity_residual.back());
    if (rep.r_sum[i] > tol) rep.witness = true;
  }
  rep.identity_holds = rep.max_identity_residual <= tol;
  return rep;
}

double CrosscheckReport::max() const noexcept {
  return std::max({stationarity, complementarity, budget, feasibility});
}

CrosscheckReport kkt_crosscheck(const MarketInstance& inst, std::span<const double> lambda,
                                const Allocation& x, const PriceVector& p, const Matrix& r,
                                double tol, double eps) {
  const std::size_t n = inst.n_agents(), m = inst.n_goods(), T = inst.n_types();
  if (lambda.size() != n || x.rows() != n || x.cols() != m || p.size() != m ||
      r.rows() != n || r.cols() != T) {
    throw Error(Errc::dimension_mismatch, "cross-check inputs do not match the instance");
  }
  CrosscheckReport rep;
  rep.fixed_point_residual = fixed_point_residual(lambda, r);
  if (rep.fixed_point_residual > eps) {
    std::ostringstream msg;
    msg << "||lambda - sum_t r|| = " << rep.fixed_point_residual << " exceeds " << eps;
    throw Error(Errc::not_at_fixed_point, msg.str());
  }
  rep.r_tilde = Matrix(n, T);
  for (std::size_t i = 0; i < n; ++i) {
    double U = 0.0, spend = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      U += inst.utility(i, j) * x(i, j);
      spend += p[j] * x(i, j);
      rep.feasibility = std::max(rep.feasibility, -x(i, j));
    }
    const double y = U / (inst.budget(i) + lambda[i]);
    rep.y.push_back(y);
    rep.feasibility = std::max(rep.feasibility, -y);
    for (std::size_t t = 0; t < T; ++t) {
      if (!inst.participates(i, t)) continue;
      const double rt = y * r(i, t);
      rep.r_tilde(i, t) = rt;
      double sum = 0.0;
      for (std::size_t j : inst.type(t)) sum += x(i, j);
      rep.feasibility = std::max({rep.feasibility, -rt, sum - 1.0});
      rep.complementarity = std::max(rep.complementarity, std::abs(rt * (1.0 - sum)));
    }
    for (std::size_t j = 0; j < m; ++j) {
      double reduced = inst.utility(i, j) - y * p[j];
      if (auto t = inst.type_of(j); t && inst.participates(i, *t)) reduced -= rep.r_tilde(i, *t);
      rep.stationarity = std::max(rep.stationarity, reduced);
      rep.complementarity = std::max(rep.complementarity, std::abs(x(i, j) * reduced));
    }
    rep.budget = std::max(rep.budget, std::abs(spend - inst.budget(i)));
  }
  rep.pass = rep.max() <= tol;
  return rep;
}

double grid_residual(const MarketInstance& inst, std::span<const double> p) {
  double best = std::numeric_limits<double>::infinity();
  for (TieBreak tie : {TieBreak::standard, TieBreak::reversed}) {
    MarketDemand d;
    try {
      d = demand_all(inst, p, tie);
    } catch (const Error& e) {
      if (e.code() == Errc::unbounded_demand) return best;
      throw;
    }
    double res = 0.0;
    for (double f : d.excess) res = std::max(res, std::abs(f));
    for (std::size_t i = 0; i < inst.n_agents(); ++i) {
      res = std::max(res, std::abs(d.agents[i].spend - inst.budget(i)));
    }
    best = std::min(best, res);
  }
  return best;
}

GridScanReport grid_nonexistence(const MarketInstance& inst, double p_max, double step,
                                 double near_tol) {
  const std::size_t m = inst.n_goods();
  if (m == 0 || m > 3) throw Error(Errc::invalid_argument, "grid scan needs 1 to 3 goods");
  if (!(step > 0.0) || !(p_max >= 0.0) || !std::isfinite(p_max)) {
    throw Error(Errc::invalid_argument, "grid scan needs step > 0 and p_max >= 0");
  }
  const double per_axis = std::floor(p_max / step + 1e-9) + 1.0;
  const double total = std::pow(per_axis, static_cast<double>(m));
  if (total > 1e7) {
    std::ostringstream msg;
    msg << "grid has " << total << " points, limit is 1e7";
    throw Error(Errc::grid_too_large, msg.str());
  }
  const auto k_max = static_cast<std::size_t>(per_axis);

  GridScanReport rep;
  rep.step = step;
  rep.near_tol = near_tol;
  rep.min_residual = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> k(m, 0);
  PriceVector p(m, 0.0);
  for (;;) {
    for (std::size_t j = 0; j < m; ++j) p[j] = static_cast<double>(k[j]) * step;
    ++rep.points;
    const double res = grid_residual(inst, p);
    if (std::isinf(res)) {
      ++rep.skipped;
    } else {
      if (res < rep.min_residual) {
        rep.min_residual = res;
        rep.argmin = p;
      }
      if (res <= near_tol) rep.near_clearing.push_back(p);
    }
    // Last coordinate fastest: scan order is lexicographic in p.
    std::size_t j = m;
    while (j > 0 && ++k[j - 1] == k_max) k[--j] = 0;
    if (j == 0) break;
  }
  rep.claims_nonexistence = rep.min_residual >= 10.0 * step;
  return rep;
}

bool existence_condition(const MarketInstance& inst) {
  bool untyped = false;
  for (std::size_t j = 0; j < inst.n_goods(); ++j) untyped = untyped || !inst.type_of(j);
  if (!untyped) return false;
  for (std::size_t i = 0; i < inst.n_agents(); ++i)
    for (std::size_t j = 0; j < inst.n_goods(); ++j)
      if (!(inst.utility(i, j) > 0.0)) return false;
  return true;
}

}  // namespace cfm
