#include "cfm/fixed_point.hpp"

#include <cmath>
#include <sstream>

#include "cfm/error.hpp"
#include "cfm/report_json.hpp"

namespace cfm {

std::string_view to_string(FixedPointStatus s) noexcept {
  switch (s) {
    case FixedPointStatus::converged: return "converged";
    case FixedPointStatus::max_iter: return "max_iter";
    case FixedPointStatus::solver_failure: return "solver_failure";
    case FixedPointStatus::oscillating: return "oscillating";
  }
  return "unknown";
}

std::vector<double> row_sums(const Matrix& r) {
  std::vector<double> q(r.rows(), 0.0);
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (double v : r.row(i)) q[i] += v;
  return q;
}

double fixed_point_residual(std::span<const double> lambda, std::span<const double> q) {
  if (lambda.size() != q.size()) {
    throw Error(Errc::dimension_mismatch, "lambda has " + std::to_string(lambda.size()) +
                                              " entries, q has " + std::to_string(q.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += (lambda[i] - q[i]) * (lambda[i] - q[i]);
  return std::sqrt(sum);
}

double fixed_point_residual(std::span<const double> lambda, const Matrix& r) {
  return fixed_point_residual(lambda, row_sums(r));
}

FixedPointResult run_fixed_point(const MarketInstance& inst, const FixedPointOptions& opts) {
  if (!(opts.eps > 0.0)) throw Error(Errc::invalid_argument, "eps must be positive");
  FixedPointResult out;
  FixedPointTrace& trace = out.trace;
  std::vector<double> lambda(inst.n_agents(), 0.0);

  for (std::size_t k = 1;; ++k) {
    SolveResult sol;
    try {
      sol = solve_bpsop(inst, lambda, opts.solver);
    } catch (const Error& e) {
      if (e.code() == Errc::validation_failed) throw;
      trace.status = FixedPointStatus::solver_failure;
      trace.failed_iteration = k;
      trace.message = std::string(to_string(e.code())) + ": " + e.what();
      return out;
    }
    if (!solved(sol.stats.status)) {
      trace.status = FixedPointStatus::solver_failure;
      trace.failed_iteration = k;
      trace.message = "solver status " + std::string(to_string(sol.stats.status));
      return out;
    }

    DualSummary summary;
    summary.p = sol.duals.p;
    summary.q = row_sums(sol.duals.r);
    summary.objective = sol.duals.objective;
    summary.status = sol.stats.status;
    summary.solver_iterations = sol.stats.iterations;
    summary.kkt = kkt_residuals(inst, lambda, sol.x, sol.duals.p, sol.duals.r).max();
    const double res = fixed_point_residual(lambda, summary.q);

    trace.iterates.push_back(lambda);
    trace.residuals.push_back(res);
    std::vector<double> q = summary.q;
    trace.duals.push_back(std::move(summary));

    out.lambda = lambda;
    out.p = sol.duals.p;
    out.x = std::move(sol.x);
    out.duals = std::move(sol.duals);
    out.stats = std::move(sol.stats);

    if (res <= opts.eps) {
      trace.status = FixedPointStatus::converged;
      return out;
    }
    if (k >= opts.max_iter) {
      trace.status = FixedPointStatus::max_iter;
      return out;
    }
    if (opts.window > 0 && k > opts.window && res >= trace.residuals[k - 1 - opts.window]) {
      trace.status = FixedPointStatus::oscillating;
      return out;
    }
    lambda = std::move(q);
  }
}

std::string trace_csv(const FixedPointTrace& trace) {
  std::ostringstream os;
  os << "iter,residual";
  const std::size_t n = trace.iterates.empty() ? 0 : trace.iterates.front().size();
  for (std::size_t i = 0; i < n; ++i) os << ",lambda_" << i + 1;
  os << '\n';
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    os << k + 1 << ',' << format_number(trace.residuals[k]);
    for (double v : trace.iterates[k]) os << ',' << format_number(v);
    os << '\n';
  }
  return os.str();
}

}  // namespace cfm
