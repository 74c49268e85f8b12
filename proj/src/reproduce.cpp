#include "cfm/reproduce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "cfm/demand.hpp"
#include "cfm/error.hpp"
#include "cfm/fixed_point.hpp"
#include "cfm/report_json.hpp"
#include "cfm/verifier.hpp"

namespace cfm {

using nlohmann::json;

bool ReproduceReport::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const ReproduceCheck& c) { return c.pass; });
}

namespace {

// Fixed-point outputs carry residuals of order eps; checked at 1e-5 throughout.
constexpr Tolerances kFixedPointTol{1e-5, 1e-5, 1e-5};

struct LedgerLine {
  double units, slope, cost;
};

std::string tuple(std::span<const double> v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + format_number(v[k]);
  return out + ")";
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

void add(ReproduceReport& rep, std::string name, bool pass, std::string detail) {
  rep.checks.push_back({std::move(name), pass, std::move(detail)});
}

void single_agent_example(ReproduceReport& rep, const char* builtin,
                          const std::vector<double>& expected,
                          const std::vector<LedgerLine>& ledger) {
  const MarketInstance inst = builtin_instance(builtin);
  const PriceVector p = iop_example_prices();
  const DemandResult d = demand(inst, 0, p);

  double err = 0.0;
  for (std::size_t j = 0; j < expected.size(); ++j) err = std::max(err, std::abs(d.x[j] - expected[j]));
  add(rep, "allocation", err <= 1e-9, "x = " + tuple(d.x) + ", max error " + sci(err));

  bool same = d.purchases.size() == ledger.size();
  double lerr = 0.0;
  for (std::size_t k = 0; same && k < ledger.size(); ++k) {
    lerr = std::max({lerr, std::abs(d.purchases[k].units - ledger[k].units),
                     std::abs(d.purchases[k].product.slope - ledger[k].slope),
                     std::abs(d.purchases[k].cost - ledger[k].cost)});
  }
  std::ostringstream lines;
  for (std::size_t k = 0; k < d.purchases.size(); ++k) {
    const Purchase& b = d.purchases[k];
    lines << (k ? "; " : "") << format_number(b.units) << " unit(s) theta=" << format_number(b.product.slope)
          << " cost " << format_number(b.cost);
  }
  add(rep, "purchase ledger", same && lerr <= 1e-9, lines.str());
  add(rep, "budget spent", std::abs(d.spend - inst.budget(0)) <= 1e-9,
      "spend " + format_number(d.spend) + " of " + format_number(inst.budget(0)));
  rep.data["demand"] = to_json(d);
  rep.data["prices"] = vector_json(p);
}

void iop_ex1(ReproduceReport& rep, const ReproduceOptions&) {
  single_agent_example(rep, "iop_ex1", {0, 0, 0.5, 1, 0.5, 0},
                       {{1, 0.1, 0.1}, {1, 0.2, 0.4}, {1, 0.3, 0.6}, {1, 0.4, 0.8}, {0.5, 0.5, 0.5}});
}

void iop_ex2(ReproduceReport& rep, const ReproduceOptions&) {
  single_agent_example(rep, "iop_ex2", {0, 1, 1, 0, 2, 0},
                       {{1, 0.1, 0.1}, {1, 0.2, 0.4}, {1, 0.3, 0.6}, {2, 0.34, 3.4}});
  const PriceVector p = iop_example_prices();
  const auto theta5 = untyped_rate(4, builtin_instance("iop_ex2").utility(0, 4), p[4]);
  add(rep, "theta_5", theta5 && std::abs(theta5->slope - 0.34) <= 1e-12,
      "theta_5 = " + format_number(theta5 ? theta5->slope : NAN));
}

void prop2(ReproduceReport& rep, const ReproduceOptions& opts) {
  const MarketInstance inst = builtin_instance("prop2");
  const Allocation x = prop2_reference_allocation();
  const Tolerances tight{1e-9, 1e-9, 1e-9};
  json checks = json::array();
  for (const PriceVector& p : {PriceVector{11, 10, 9}, PriceVector{10, 10, 10}}) {
    const EquilibriumReport eq = check_equilibrium(inst, p, x, tight);
    add(rep, "equilibrium at p = " + tuple(p), eq.pass,
        "clearing " + sci(eq.max_clearing()) + ", budget " + sci(eq.max_budget()) + ", gap " +
            sci(eq.max_gap()));
    checks.push_back({{"prices", vector_json(p)}, {"report", to_json(eq)}});
  }
  rep.data["checks"] = std::move(checks);

  const GridScanReport grid = grid_nonexistence(inst, 15.0, 0.5);
  auto found = [&](const PriceVector& p) {
    return std::find(grid.near_clearing.begin(), grid.near_clearing.end(), p) !=
           grid.near_clearing.end();
  };
  add(rep, "grid scan hits both prices", found({11, 10, 9}) && found({10, 10, 10}),
      std::to_string(grid.near_clearing.size()) + " of " + std::to_string(grid.points) +
          " grid prices clear within 1e-9");
  rep.data["grid"] = {{"min_residual", grid.min_residual},
                      {"near_clearing_count", grid.near_clearing.size()},
                      {"points", grid.points}};

  FixedPointOptions fo;
  fo.eps = opts.eps;
  fo.max_iter = opts.max_iter;
  fo.solver.tol = opts.solver_tol;
  const FixedPointResult fp = run_fixed_point(inst, fo);
  const bool converged = fp.trace.status == FixedPointStatus::converged;
  std::string detail = std::string(to_string(fp.trace.status)) + " after " +
                       std::to_string(fp.trace.residuals.size()) + " iterations";
  bool eq_pass = false;
  if (converged) {
    const EquilibriumReport eq = check_equilibrium(inst, fp.p, fp.x, kFixedPointTol);
    eq_pass = eq.pass;
    detail += ", p = " + tuple(fp.p) + ", check " + (eq.pass ? "pass" : "fail");
  }
  add(rep, "fixed point reaches an equilibrium", converged && eq_pass, detail);
  rep.data["fixed_point"] = to_json(fp);
}

void prop1(ReproduceReport& rep, const ReproduceOptions&) {
  const MarketInstance inst = builtin_instance("prop1");
  add(rep, "existence condition fails", !existence_condition(inst), "both goods share one type");
  const GridScanReport grid = grid_nonexistence(inst, 30.0, 0.05);
  std::string detail = "min residual " + format_number(grid.min_residual) + " at p = " +
                       tuple(grid.argmin) + " over " + std::to_string(grid.points) + " points";
  if (!grid.claims_nonexistence) detail += " (below the 10 x step margin)";
  add(rep, "no near-clearing grid price", grid.min_residual >= 0.1, detail);
  rep.data["grid"] = to_json(grid);
}

void experiment(ReproduceReport& rep, const ReproduceOptions& opts) {
  const MarketInstance inst = builtin_instance(Builtin::experiment, opts.seed);
  FixedPointOptions fo;
  fo.eps = opts.eps;
  fo.max_iter = opts.max_iter;
  fo.solver.tol = opts.solver_tol;
  const FixedPointResult fp = run_fixed_point(inst, fo);
  const std::size_t iters = fp.trace.residuals.size();
  const bool converged = fp.trace.status == FixedPointStatus::converged;
  add(rep, "fixed point converges", converged,
      std::string(to_string(fp.trace.status)) + ", last residual " +
          sci(fp.trace.residuals.empty() ? NAN : fp.trace.residuals.back()));
  add(rep, "iterations <= 100", converged && iters <= 100, std::to_string(iters) + " iterations");

  if (fp.x.rows() == 0) {
    add(rep, "equilibrium check", false, "no solve completed: " + fp.trace.message);
  } else {
    const EquilibriumReport eq = check_equilibrium(inst, fp.p, fp.x, kFixedPointTol);
    add(rep, "equilibrium check", eq.pass,
        "clearing " + sci(eq.max_clearing()) + ", budget " + sci(eq.max_budget()) + ", gap " +
            sci(eq.max_gap()));
    double dev = 0.0;
    for (std::size_t i = 0; i < eq.type_sums.rows(); ++i)
      for (double v : eq.type_sums.row(i))
        if (!std::isnan(v)) dev = std::max(dev, std::abs(v - 1.0));
    add(rep, "type sums equal 1", dev <= 1e-5, "max |sum - 1| = " + sci(dev));
    rep.data["equilibrium"] = to_json(eq);
    try {
      const CrosscheckReport cc = kkt_crosscheck(inst, fp.lambda, fp.x, fp.p, fp.duals.r, 1e-6, opts.eps);
      add(rep, "individual-problem KKT", cc.pass, "max residual " + sci(cc.max()));
      rep.data["crosscheck"] = to_json(cc);
    } catch (const Error& e) {
      if (e.code() != Errc::not_at_fixed_point) throw;
      add(rep, "individual-problem KKT", false, std::string("refused: ") + e.what());
    }
  }
  rep.data["fixed_point"] = to_json(fp);
}

void sop1_gap(ReproduceReport& rep, const ReproduceOptions& opts) {
  const MarketInstance inst = builtin_instance(Builtin::experiment, opts.seed);
  SolveOptions so;
  so.tol = opts.solver_tol;
  const BudgetGapReport gap = sop1_budget_gap(inst, 1e-6, so);
  std::size_t count = 0;
  for (double g : gap.gap) count += g > 1e-3;
  add(rep, "some budget left unspent", gap.max_gap > 1e-3,
      std::to_string(count) + " agents with gap > 1e-3, largest " + format_number(gap.max_gap));
  add(rep, "gap equals sum of type duals", gap.max_identity_residual <= 1e-6,
      "max identity residual " + sci(gap.max_identity_residual));
  rep.data["budget_gap"] = to_json(gap);
}

}  // namespace

std::vector<std::string_view> reproduce_names() {
  return {"prop1", "prop2", "iop_ex1", "iop_ex2", "experiment", "sop1_gap"};
}

ReproduceReport reproduce(std::string_view name, const ReproduceOptions& opts) {
  ReproduceReport rep;
  rep.name = std::string(name);
  rep.data = json::object();
  const auto t0 = std::chrono::steady_clock::now();
  if (name == "iop_ex1") {
    iop_ex1(rep, opts);
  } else if (name == "iop_ex2") {
    iop_ex2(rep, opts);
  } else if (name == "prop1") {
    prop1(rep, opts);
  } else if (name == "prop2") {
    prop2(rep, opts);
  } else if (name == "experiment") {
    experiment(rep, opts);
  } else if (name == "sop1_gap") {
    sop1_gap(rep, opts);
  } else {
    throw Error(Errc::unknown_name, "unknown reproduction '" + std::string(name) +
                                        "' (expected prop1, prop2, iop_ex1, iop_ex2, experiment, sop1_gap)");
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string format_table(const ReproduceReport& rep) {
  std::size_t width = 5;
  for (const auto& c : rep.checks) width = std::max(width, c.name.size());
  std::ostringstream os;
  os << "reproduce " << rep.name << '\n';
  for (const auto& c : rep.checks) {
    os << "  " << c.name << std::string(width - c.name.size() + 2, ' ') << (c.pass ? "PASS" : "FAIL")
       << "  " << c.detail << '\n';
  }
  os << "  " << (rep.pass() ? "PASS" : "FAIL") << " (" << sci(rep.seconds) << " s)\n";
  return os.str();
}

json to_json(const ReproduceReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return {{"name", rep.name},
          {"pass", rep.pass()},
          {"seconds", rep.seconds},
          {"checks", std::move(checks)},
          {"data", rep.data}};
}

}  // namespace cfm
