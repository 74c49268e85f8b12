#include "cfm/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cfm {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

namespace {

// Non-finite values have no JSON spelling; they become null.
json number(double v) { return std::isfinite(v) ? json(round12(v)) : json(nullptr); }

json issues(const std::vector<Issue>& list) {
  json out = json::array();
  for (const Issue& i : list) out.push_back({{"code", i.code}, {"message", i.message}});
  return out;
}

json indices(const std::vector<std::size_t>& v) {
  json out = json::array();
  for (std::size_t k : v) out.push_back(k);
  return out;
}

}  // namespace

json vector_json(std::span<const double> v) {
  json out = json::array();
  for (double e : v) out.push_back(number(e));
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i)));
  return out;
}

json to_json(const ValidationReport& rep) {
  return {{"ok", rep.ok()},
          {"errors", issues(rep.errors)},
          {"warnings", issues(rep.warnings)},
          {"degenerate_tight_types", indices(rep.degenerate_tight_types)}};
}

json to_json(const DemandResult& d) {
  json ledger = json::array();
  for (const Purchase& b : d.purchases) {
    json item = {{"hi", b.product.hi},
                 {"slope", number(b.product.slope)},
                 {"units", number(b.units)},
                 {"cost", number(b.cost)},
                 {"unbounded", b.product.unbounded}};
    item["type"] = b.product.type ? json(*b.product.type) : json(nullptr);
    item["lo"] = b.product.lo ? json(*b.product.lo) : json(nullptr);
    ledger.push_back(std::move(item));
  }
  return {{"x", vector_json(d.x)},
          {"spend", number(d.spend)},
          {"utility", number(d.utility)},
          {"alpha_star", number(d.alpha_star)},
          {"budget_exhausted", d.budget_exhausted},
          {"tight_types", indices(d.tight_types)},
          {"purchases", std::move(ledger)}};
}

json to_json(const KktReport& k) {
  return {{"stationarity", number(k.stationarity)},
          {"complementarity", number(k.complementarity)},
          {"primal_feasibility", number(k.primal_feasibility)},
          {"dual_feasibility", number(k.dual_feasibility)}};
}

json to_json(const SolveResult& r, std::span<const double> lambda) {
  json duals = {{"r", matrix_json(r.duals.r)},
                {"r_raw", matrix_json(r.duals.r_raw)},
                {"r_sum", vector_json(row_sums(r.duals.r))},
                {"gauge_shift", vector_json(r.duals.gauge_shift)},
                {"s", matrix_json(r.duals.s)},
                {"objective", number(r.duals.objective)},
                {"negative_prices", indices(r.duals.negative_prices)}};
  return {{"status", std::string(to_string(r.stats.status))},
          {"lambda", vector_json(lambda)},
          {"prices", vector_json(r.duals.p)},
          {"allocation", matrix_json(r.x)},
          {"residuals",
           {{"stationarity", number(r.stats.stationarity_residual)},
            {"primal_feasibility", number(r.stats.primal_feasibility_residual)},
            {"complementarity", number(r.stats.complementarity_residual)}}},
          {"duals", std::move(duals)},
          {"iterations", r.stats.iterations},
          {"degenerate_types", indices(r.stats.degenerate_types)}};
}

json to_json(const FixedPointResult& r) {
  const auto& t = r.trace;
  json out = {{"status", std::string(to_string(t.status))},
              {"lambda", vector_json(r.lambda)},
              {"prices", vector_json(r.p)},
              {"allocation", matrix_json(r.x)},
              {"iterations", t.residuals.size()},
              {"residuals",
               {{"fixed_point", t.residuals.empty() ? json(nullptr) : number(t.residuals.back())},
                {"stationarity", number(r.stats.stationarity_residual)},
                {"primal_feasibility", number(r.stats.primal_feasibility_residual)},
                {"complementarity", number(r.stats.complementarity_residual)}}},
              {"duals",
               {{"r", matrix_json(r.duals.r)},
                {"r_raw", matrix_json(r.duals.r_raw)},
                {"gauge_shift", vector_json(r.duals.gauge_shift)},
                {"objective", number(r.duals.objective)}}},
              {"residual_history", vector_json(t.residuals)}};
  if (t.status == FixedPointStatus::solver_failure) {
    out["failure"] = {{"iteration", t.failed_iteration}, {"message", t.message}};
  }
  return out;
}

json to_json(const EquilibriumReport& rep) {
  json viol = json::array();
  for (const auto& v : rep.feasibility_violations) viol.push_back(v);
  return {{"pass", rep.pass},
          {"clearing_residuals", vector_json(rep.clearing_residuals)},
          {"budget_residuals", vector_json(rep.budget_residuals)},
          {"optimality_gaps", vector_json(rep.optimality_gaps)},
          {"type_sums", matrix_json(rep.type_sums)},
          {"feasibility_violations", std::move(viol)},
          {"max",
           {{"clearing", number(rep.max_clearing())},
            {"budget", number(rep.max_budget())},
            {"optimality_gap", number(rep.max_gap())}}},
          {"tolerances",
           {{"clearing", rep.tol.clearing}, {"budget", rep.tol.budget}, {"opt", rep.tol.opt}}}};
}

json to_json(const BudgetGapReport& rep) {
  return {{"witness", rep.witness},
          {"identity_holds", rep.identity_holds},
          {"max_gap", number(rep.max_gap)},
          {"max_identity_residual", number(rep.max_identity_residual)},
          {"gap", vector_json(rep.gap)},
          {"r_sum", vector_json(rep.r_sum)},
          {"identity_residual", vector_json(rep.identity_residual)},
          {"status", std::string(to_string(rep.solve.stats.status))},
          {"prices", vector_json(rep.solve.duals.p)}};
}

json to_json(const CrosscheckReport& rep) {
  return {{"pass", rep.pass},
          {"fixed_point_residual", number(rep.fixed_point_residual)},
          {"stationarity", number(rep.stationarity)},
          {"complementarity", number(rep.complementarity)},
          {"budget", number(rep.budget)},
          {"feasibility", number(rep.feasibility)},
          {"y", vector_json(rep.y)},
          {"r_tilde", matrix_json(rep.r_tilde)}};
}

json to_json(const GridScanReport& rep) {
  json near = json::array();
  for (const auto& p : rep.near_clearing) near.push_back(vector_json(p));
  return {{"min_residual", number(rep.min_residual)},
          {"argmin", vector_json(rep.argmin)},
          {"points", rep.points},
          {"skipped", rep.skipped},
          {"step", number(rep.step)},
          {"claims_nonexistence", rep.claims_nonexistence},
          {"near_tol", rep.near_tol},
          {"near_clearing", std::move(near)}};
}

}  // namespace cfm
