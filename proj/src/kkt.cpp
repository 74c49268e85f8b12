#include <algorithm>
#include <cmath>
#include <string>

#include "cfm/eg_solver.hpp"
#include "cfm/error.hpp"

namespace cfm {

double KktReport::max() const noexcept {
  return std::max({stationarity, complementarity, primal_feasibility, dual_feasibility});
}

namespace {

void check_shapes(const MarketInstance& inst, std::span<const double> lambda, const Allocation& x,
                  const PriceVector& p, const Matrix& r) {
  const std::size_t n = inst.n_agents(), m = inst.n_goods();
  if (lambda.size() != n || x.rows() != n || x.cols() != m || p.size() != m ||
      r.rows() != n || r.cols() != inst.n_types()) {
    throw Error(Errc::dimension_mismatch, "KKT inputs do not match the instance dimensions");
  }
}

std::vector<double> agent_utilities(const MarketInstance& inst, const Allocation& x) {
  std::vector<double> U(inst.n_agents(), 0.0);
  for (std::size_t i = 0; i < inst.n_agents(); ++i) {
    for (std::size_t j = 0; j < inst.n_goods(); ++j) U[i] += inst.utility(i, j) * x(i, j);
    if (!(U[i] > 0.0)) {
      throw Error(Errc::log_domain, "agent " + std::to_string(i + 1) + " has zero utility");
    }
  }
  return U;
}

}  // namespace

double bpsop_objective(const MarketInstance& inst, std::span<const double> lambda,
                       const Allocation& x) {
  if (lambda.size() != inst.n_agents() || x.rows() != inst.n_agents() ||
      x.cols() != inst.n_goods()) {
    throw Error(Errc::dimension_mismatch, "objective inputs do not match the instance");
  }
  const auto U = agent_utilities(inst, x);
  double obj = 0.0;
  for (std::size_t i = 0; i < inst.n_agents(); ++i) {
    obj += (inst.budget(i) + lambda[i]) * std::log(U[i]);
  }
  return obj;
}

KktReport kkt_residuals(const MarketInstance& inst, std::span<const double> lambda,
                        const Allocation& x, const PriceVector& p, const Matrix& r) {
  check_shapes(inst, lambda, x, p, r);
  const std::size_t n = inst.n_agents(), m = inst.n_goods(), T = inst.n_types();
  const auto U = agent_utilities(inst, x);
  KktReport rep;

  for (std::size_t i = 0; i < n; ++i) {
    const double c = inst.budget(i) + lambda[i];
    for (std::size_t j = 0; j < m; ++j) {
      double reduced = c * inst.utility(i, j) / U[i] - p[j];
      if (auto t = inst.type_of(j); t && inst.participates(i, *t)) reduced -= r(i, *t);
      rep.stationarity = std::max(rep.stationarity, reduced);
      rep.complementarity = std::max(rep.complementarity, std::abs(x(i, j) * reduced));
      rep.primal_feasibility = std::max(rep.primal_feasibility, -x(i, j));
    }
    for (std::size_t t = 0; t < T; ++t) {
      if (!inst.participates(i, t)) continue;
      double sum = 0.0;
      for (std::size_t j : inst.type(t)) sum += x(i, j);
      rep.primal_feasibility = std::max(rep.primal_feasibility, sum - 1.0);
      rep.complementarity = std::max(rep.complementarity, std::abs(r(i, t) * (1.0 - sum)));
      rep.dual_feasibility = std::max(rep.dual_feasibility, -r(i, t));
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x(i, j);
    rep.primal_feasibility = std::max(rep.primal_feasibility, std::abs(sum - inst.capacity(j)));
  }
  return rep;
}

}  // namespace cfm
