#include "cfm/cfm.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "cfm/error.hpp"
#include "cfm/fixed_point.hpp"
#include "cfm/instance_io.hpp"
#include "cfm/report_json.hpp"
#include "cfm/reproduce.hpp"
#include "cfm/verifier.hpp"

struct cfm_instance {
  cfm::MarketInstance inst;
};

namespace {

thread_local std::string g_last_error;

cfm_status from_errc(cfm::Errc code) {
  switch (code) {
    case cfm::Errc::invalid_argument: return CFM_INVALID_ARGUMENT;
    case cfm::Errc::parse_error: return CFM_PARSE_ERROR;
    case cfm::Errc::validation_failed: return CFM_VALIDATION_FAILED;
    case cfm::Errc::unknown_name: return CFM_UNKNOWN_NAME;
    case cfm::Errc::infeasible: return CFM_INFEASIBLE;
    case cfm::Errc::unbounded_demand: return CFM_UNBOUNDED_DEMAND;
    case cfm::Errc::log_domain: return CFM_LOG_DOMAIN;
    case cfm::Errc::not_at_fixed_point: return CFM_NOT_AT_FIXED_POINT;
    case cfm::Errc::dimension_mismatch: return CFM_DIMENSION_MISMATCH;
    case cfm::Errc::grid_too_large: return CFM_GRID_TOO_LARGE;
    case cfm::Errc::io_error: return CFM_IO_ERROR;
    case cfm::Errc::solver_failure: return CFM_SOLVER_FAILURE;
  }
  return CFM_INTERNAL_ERROR;
}

template <class F>
cfm_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return CFM_OK;
  } catch (const cfm::Error& e) {
    g_last_error = e.what();
    return from_errc(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CFM_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CFM_INTERNAL_ERROR;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw cfm::Error(cfm::Errc::invalid_argument, what);
}

// Copies into malloc'd storage; a NULL destination discards the text.
void emit(char** out, const std::string& text) {
  if (!out) return;
  char* s = static_cast<char*>(std::malloc(text.size() + 1));
  if (!s) throw std::bad_alloc();
  std::memcpy(s, text.c_str(), text.size() + 1);
  *out = s;
}

void emit(char** out, const nlohmann::json& doc) {
  if (out) emit(out, doc.dump(2) + "\n");
}

void set_flag(int* flag, bool v) {
  if (flag) *flag = v ? 1 : 0;
}

cfm_options options_or_default(const cfm_options* opts) {
  cfm_options o;
  cfm_options_init(&o);
  return opts ? *opts : o;
}

cfm::SolveOptions solver_options(const cfm_options& o) {
  cfm::SolveOptions s;
  s.tol = o.solver_tol;
  s.max_iter = o.solver_max_iter;
  return s;
}

cfm::Tolerances tolerances(const cfm_options& o) {
  return {o.tol_clearing, o.tol_budget, o.tol_opt};
}

void make_instance(cfm::MarketInstance inst, cfm_instance** out) {
  *out = new cfm_instance{std::move(inst)};
}

}  // namespace

extern "C" {

void cfm_options_init(cfm_options* opts) {
  if (!opts) return;
  opts->solver_tol = 1e-8;
  opts->solver_max_iter = 200;
  opts->eps = 1e-6;
  opts->fp_max_iter = 500;
  opts->tol_clearing = 1e-5;
  opts->tol_budget = 1e-5;
  opts->tol_opt = 1e-6;
  opts->seed = 1;
}

const char* cfm_version(void) { return "0.1.0"; }

const char* cfm_status_name(cfm_status status) {
  switch (status) {
    case CFM_OK: return "ok";
    case CFM_OUT_OF_MEMORY: return "out-of-memory";
    case CFM_INTERNAL_ERROR: return "internal-error";
    default: break;
  }
  if (status >= CFM_INVALID_ARGUMENT && status <= CFM_SOLVER_FAILURE) {
    return cfm::to_string(static_cast<cfm::Errc>(status)).data();
  }
  return "unknown";
}

const char* cfm_last_error(void) { return g_last_error.c_str(); }

void cfm_string_free(char* s) { std::free(s); }

cfm_status cfm_instance_from_json(const char* json, cfm_instance** out) {
  return guarded([&] {
    require(json && out, "json and out must not be NULL");
    make_instance(cfm::instance_from_json(json), out);
  });
}

cfm_status cfm_instance_load(const char* path, cfm_instance** out) {
  return guarded([&] {
    require(path && out, "path and out must not be NULL");
    make_instance(cfm::load_instance(path), out);
  });
}

cfm_status cfm_instance_builtin(const char* name, uint64_t seed, cfm_instance** out) {
  return guarded([&] {
    require(name && out, "name and out must not be NULL");
    make_instance(cfm::builtin_instance(std::string_view(name), seed), out);
  });
}

cfm_status cfm_instance_random(uint64_t seed, size_t n_agents, size_t n_goods,
                               const char* type_spec, double budget_lo, double budget_hi,
                               double utility_lo, double utility_hi, double capacity,
                               cfm_instance** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    cfm::RandomSpec spec;
    spec.seed = seed;
    spec.n_agents = n_agents;
    spec.n_goods = n_goods;
    spec.types = cfm::parse_type_spec(type_spec ? type_spec : "none");
    spec.budgets = {budget_lo, budget_hi};
    spec.utilities = {utility_lo, utility_hi};
    if (capacity > 0.0) spec.capacity = capacity;
    make_instance(cfm::random_instance(spec), out);
  });
}

void cfm_instance_free(cfm_instance* inst) { delete inst; }

size_t cfm_instance_agents(const cfm_instance* inst) { return inst ? inst->inst.n_agents() : 0; }
size_t cfm_instance_goods(const cfm_instance* inst) { return inst ? inst->inst.n_goods() : 0; }
size_t cfm_instance_types(const cfm_instance* inst) { return inst ? inst->inst.n_types() : 0; }

cfm_status cfm_instance_to_json(const cfm_instance* inst, char** out) {
  return guarded([&] {
    require(inst && out, "inst and out must not be NULL");
    emit(out, cfm::instance_to_json(inst->inst));
  });
}

cfm_status cfm_validate(const cfm_instance* inst, int* ok, char** report_json) {
  return guarded([&] {
    require(inst != nullptr, "inst must not be NULL");
    const cfm::ValidationReport rep = cfm::validate_instance(inst->inst);
    set_flag(ok, rep.ok());
    emit(report_json, cfm::to_json(rep));
  });
}

cfm_status cfm_solve(const cfm_instance* inst, const double* lambda, size_t n_lambda,
                     const cfm_options* opts, int* solved, char** result_json) {
  return guarded([&] {
    require(inst != nullptr, "inst must not be NULL");
    require(lambda || n_lambda == 0, "lambda is NULL but n_lambda > 0");
    const cfm_options o = options_or_default(opts);
    std::vector<double> lam = lambda ? std::vector<double>(lambda, lambda + n_lambda)
                                     : std::vector<double>(inst->inst.n_agents(), 0.0);
    const cfm::SolveResult r = cfm::solve_bpsop(inst->inst, lam, solver_options(o));
    set_flag(solved, cfm::solved(r.stats.status));
    emit(result_json, cfm::to_json(r, lam));
  });
}

cfm_status cfm_fixed_point(const cfm_instance* inst, const cfm_options* opts, int* converged,
                           char** result_json, char** trace_csv) {
  return guarded([&] {
    require(inst != nullptr, "inst must not be NULL");
    const cfm_options o = options_or_default(opts);
    cfm::FixedPointOptions fo;
    fo.eps = o.eps;
    fo.max_iter = o.fp_max_iter;
    fo.solver = solver_options(o);
    const cfm::FixedPointResult r = cfm::run_fixed_point(inst->inst, fo);
    set_flag(converged, r.trace.status == cfm::FixedPointStatus::converged);
    emit(result_json, cfm::to_json(r));
    if (trace_csv) emit(trace_csv, cfm::trace_csv(r.trace));
  });
}

cfm_status cfm_demand(const cfm_instance* inst, size_t agent, const double* prices,
                      size_t n_prices, char** result_json) {
  return guarded([&] {
    require(inst && prices, "inst and prices must not be NULL");
    const cfm::DemandResult d = cfm::demand(inst->inst, agent, {prices, n_prices});
    emit(result_json, cfm::to_json(d));
  });
}

cfm_status cfm_check_equilibrium(const cfm_instance* inst, const double* prices,
                                 size_t n_prices, const double* allocation, size_t n_allocation,
                                 const cfm_options* opts, int* pass, char** report_json) {
  return guarded([&] {
    require(inst && prices && allocation, "inst, prices and allocation must not be NULL");
    const std::size_t n = inst->inst.n_agents(), m = inst->inst.n_goods();
    if (n_allocation != n * m) {
      throw cfm::Error(cfm::Errc::dimension_mismatch,
                       "allocation must have " + std::to_string(n * m) + " entries");
    }
    cfm::Allocation x(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) x(i, j) = allocation[i * m + j];
    const cfm::EquilibriumReport rep =
        cfm::check_equilibrium(inst->inst, {prices, n_prices}, x, tolerances(options_or_default(opts)));
    set_flag(pass, rep.pass);
    emit(report_json, cfm::to_json(rep));
  });
}

cfm_status cfm_check_equilibrium_json(const cfm_instance* inst, const char* prices_json,
                                      const char* allocation_json, const cfm_options* opts,
                                      int* pass, char** report_json) {
  return guarded([&] {
    require(inst && prices_json && allocation_json,
            "inst, prices_json and allocation_json must not be NULL");
    const cfm::PriceVector p = cfm::prices_from_json(prices_json);
    const cfm::Allocation x = cfm::allocation_from_json(allocation_json);
    const cfm::EquilibriumReport rep =
        cfm::check_equilibrium(inst->inst, p, x, tolerances(options_or_default(opts)));
    set_flag(pass, rep.pass);
    emit(report_json, cfm::to_json(rep));
  });
}

cfm_status cfm_sop1_budget_gap(const cfm_instance* inst, const cfm_options* opts, int* witness,
                               char** report_json) {
  return guarded([&] {
    require(inst != nullptr, "inst must not be NULL");
    const cfm_options o = options_or_default(opts);
    const cfm::BudgetGapReport rep = cfm::sop1_budget_gap(inst->inst, 1e-6, solver_options(o));
    set_flag(witness, rep.witness);
    emit(report_json, cfm::to_json(rep));
  });
}

cfm_status cfm_grid_scan(const cfm_instance* inst, double p_max, double step,
                         char** report_json) {
  return guarded([&] {
    require(inst != nullptr, "inst must not be NULL");
    emit(report_json, cfm::to_json(cfm::grid_nonexistence(inst->inst, p_max, step)));
  });
}

cfm_status cfm_reproduce(const char* name, const cfm_options* opts, int* pass, char** table,
                         char** report_json) {
  return guarded([&] {
    require(name != nullptr, "name must not be NULL");
    const cfm_options o = options_or_default(opts);
    cfm::ReproduceOptions ro;
    ro.seed = o.seed;
    ro.eps = o.eps;
    ro.max_iter = o.fp_max_iter;
    ro.solver_tol = o.solver_tol;
    const cfm::ReproduceReport rep = cfm::reproduce(name, ro);
    set_flag(pass, rep.pass());
    emit(table, cfm::format_table(rep));
    emit(report_json, cfm::to_json(rep));
  });
}

}  // extern "C"
