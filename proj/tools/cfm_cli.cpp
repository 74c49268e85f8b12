// cfm: command-line front end over the C API.
//
// Exit codes: 0 success or pass, 1 domain failure (non-convergence, failed
// check, validation errors), 2 usage or parse error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfm/cfm.h"

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Source {
  std::string builtin;
  std::string instance;
  std::string positional;
};

struct Common {
  std::optional<double> tol;
  std::optional<double> eps;
  std::optional<std::size_t> max_iter;
  std::optional<std::size_t> solver_max_iter;
  std::uint64_t seed = 1;
  std::string out;
  std::string trace;
};

struct Owned {
  char* s = nullptr;
  ~Owned() { cfm_string_free(s); }
};

class Instance {
 public:
  ~Instance() { cfm_instance_free(p_); }
  cfm_instance** out() { return &p_; }
  const cfm_instance* get() const { return p_; }

 private:
  cfm_instance* p_ = nullptr;
};

int status_exit(cfm_status st) {
  switch (st) {
    case CFM_OK: return kOk;
    case CFM_PARSE_ERROR:
    case CFM_IO_ERROR:
    case CFM_UNKNOWN_NAME:
    case CFM_INVALID_ARGUMENT:
    case CFM_DIMENSION_MISMATCH: return kUsage;
    default: return kFail;
  }
}

int report_error(cfm_status st) {
  std::cerr << "error [" << cfm_status_name(st) << "]: " << cfm_last_error() << '\n';
  return status_exit(st);
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

// A JSON literal when it starts with '[' or '{', a file path otherwise.
bool literal_or_file(const std::string& arg, std::string& text) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) {
    text = arg;
    return true;
  }
  if (read_file(arg, text)) return true;
  std::cerr << "error: cannot read '" << arg << "'\n";
  return false;
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("--builtin", src.builtin,
                  "Builtin instance: prop1, prop2, iop_ex1, iop_ex2, experiment");
  cmd->add_option("--instance", src.instance, "Instance JSON file");
  cmd->add_option("file", src.positional, "Instance JSON file");
}

// Loads the instance named by exactly one source flag.
int load(const Source& src, std::uint64_t seed, Instance& inst) {
  const int given = !src.builtin.empty() + !src.instance.empty() + !src.positional.empty();
  if (given != 1) {
    std::cerr << "error: give exactly one of --builtin NAME, --instance FILE or FILE\n";
    return kUsage;
  }
  cfm_status st;
  if (!src.builtin.empty()) {
    st = cfm_instance_builtin(src.builtin.c_str(), seed, inst.out());
  } else {
    st = cfm_instance_load((src.instance.empty() ? src.positional : src.instance).c_str(), inst.out());
  }
  return st == CFM_OK ? kOk : report_error(st);
}

cfm_options make_options(const Common& c) {
  cfm_options o;
  cfm_options_init(&o);
  if (c.tol) o.solver_tol = *c.tol;
  if (c.eps) o.eps = *c.eps;
  if (c.solver_max_iter) o.solver_max_iter = *c.solver_max_iter;
  o.seed = c.seed;
  return o;
}

bool parse_number_list(const std::string& text, std::vector<double>& out) {
  std::string s = text;
  for (char& ch : s)
    if (ch == '[' || ch == ']' || ch == ',') ch = ' ';
  std::istringstream in(s);
  double v;
  while (in >> v) out.push_back(v);
  return in.eof();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria of Fisher markets with per-agent type constraints"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cfm_version()));

  Source src;
  Common common;
  auto shared = [&](CLI::App* cmd, bool solver, bool fixed_point) {
    add_source(cmd, src);
    cmd->add_option("--seed", common.seed, "Seed of the builtin experiment instance");
    cmd->add_option("--out", common.out, "Write the JSON result here instead of stdout");
    if (solver) {
      cmd->add_option("--tol", common.tol, "Interior-point tolerance")->check(CLI::PositiveNumber);
      cmd->add_option("--solver-max-iter", common.solver_max_iter, "Interior-point iteration limit");
    }
    if (fixed_point) {
      cmd->add_option("--eps", common.eps, "Fixed-point tolerance")->check(CLI::PositiveNumber);
    }
  };

  auto* validate = app.add_subcommand("validate", "Check an instance and list warnings");
  shared(validate, false, false);

  auto* solve = app.add_subcommand("solve", "Solve the budget-perturbed program once");
  shared(solve, true, false);
  bool sop1 = false;
  std::string lambda_arg;
  solve->add_flag("--sop1", sop1, "Unperturbed program (lambda = 0)");
  solve->add_option("--lambda", lambda_arg, "Per-agent perturbations: JSON array or file");
  solve->add_option("--max-iter", common.solver_max_iter, "Interior-point iteration limit");

  auto* fixed = app.add_subcommand("fixed-point", "Iterate lambda <- sum_t r to a fixed point");
  shared(fixed, true, true);
  fixed->add_option("--max-iter", common.max_iter, "Fixed-point iteration limit");
  fixed->add_option("--trace", common.trace, "Write iter,residual,lambda_* CSV here");

  auto* check = app.add_subcommand("check", "Verify a price vector and allocation");
  shared(check, false, false);
  std::string prices_arg, alloc_arg;
  std::optional<double> tol_clearing, tol_budget, tol_opt, check_tol;
  check->add_option("--prices", prices_arg, "Prices: JSON array or file")->required();
  check->add_option("--alloc", alloc_arg, "Allocation rows or a results JSON: literal or file")
      ->required();
  check->add_option("--tol", check_tol, "Tolerance for all three residual families")
      ->check(CLI::PositiveNumber);
  check->add_option("--tol-clearing", tol_clearing, "Clearing tolerance (default 1e-5)")->check(CLI::PositiveNumber);
  check->add_option("--tol-budget", tol_budget, "Budget tolerance (default 1e-5)")->check(CLI::PositiveNumber);
  check->add_option("--tol-opt", tol_opt, "Optimality-gap tolerance (default 1e-6)")->check(CLI::PositiveNumber);

  auto* repro = app.add_subcommand("reproduce", "Re-run a worked example and assert its outcome");
  std::string repro_name;
  repro->add_option("name", repro_name, "prop1, prop2, iop_ex1, iop_ex2, experiment, sop1_gap")
      ->required();
  repro->add_option("--seed", common.seed, "Seed of the experiment instance");
  repro->add_option("--eps", common.eps, "Fixed-point tolerance")->check(CLI::PositiveNumber);
  repro->add_option("--tol", common.tol, "Interior-point tolerance")->check(CLI::PositiveNumber);
  repro->add_option("--max-iter", common.max_iter, "Fixed-point iteration limit");
  repro->add_option("--out", common.out, "Write the JSON report here");

  auto* gen = app.add_subcommand("gen", "Write a seeded random instance");
  std::size_t gen_n = 0, gen_m = 0;
  std::string gen_types = "none";
  std::vector<double> budget_range{1.0, 10.0}, utility_range{0.1, 1.0};
  double gen_capacity = 0.0;
  gen->add_option("--seed", common.seed, "Random seed");
  gen->add_option("-n,--agents", gen_n, "Number of agents")->required();
  gen->add_option("-m,--goods", gen_m, "Number of goods")->required();
  gen->add_option("--types", gen_types, "KxS (K types of S consecutive goods) or none");
  gen->add_option("--budget-range", budget_range, "LO HI")->expected(2);
  gen->add_option("--utility-range", utility_range, "LO HI")->expected(2);
  gen->add_option("--capacity", gen_capacity, "Capacity of every good (default: types fill the caps)");
  gen->add_option("-o,--out", common.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  cfm_options opts = make_options(common);
  Instance inst;
  Owned json, csv, table;
  int rc = kOk;

  if (*gen) {
    cfm_status st = cfm_instance_random(common.seed, gen_n, gen_m, gen_types.c_str(),
                                        budget_range[0], budget_range[1], utility_range[0],
                                        utility_range[1], gen_capacity, inst.out());
    if (st != CFM_OK) return report_error(st);
    if ((st = cfm_instance_to_json(inst.get(), &json.s)) != CFM_OK) return report_error(st);
    return write_output(common.out, json.s) ? kOk : kFail;
  }

  if (*repro) {
    if (common.max_iter) opts.fp_max_iter = *common.max_iter;
    int pass = 0;
    cfm_status st = cfm_reproduce(repro_name.c_str(), &opts, &pass, &table.s, &json.s);
    if (st != CFM_OK) return report_error(st);
    std::cout << table.s;
    if (!common.out.empty() && !write_output(common.out, json.s)) return kFail;
    return pass ? kOk : kFail;
  }

  if ((rc = load(src, common.seed, inst)) != kOk) return rc;

  if (*validate) {
    int ok = 0;
    cfm_status st = cfm_validate(inst.get(), &ok, &json.s);
    if (st != CFM_OK) return report_error(st);
    if (!write_output(common.out, json.s)) return kFail;
    return ok ? kOk : kFail;
  }

  if (*solve) {
    std::vector<double> lambda;
    if (sop1 && !lambda_arg.empty()) {
      std::cerr << "error: --sop1 and --lambda are exclusive\n";
      return kUsage;
    }
    if (!lambda_arg.empty()) {
      std::string text;
      if (!literal_or_file(lambda_arg, text)) return kUsage;
      if (!parse_number_list(text, lambda)) {
        std::cerr << "error: --lambda must be a JSON array of numbers\n";
        return kUsage;
      }
    }
    int solved = 0;
    cfm_status st = cfm_solve(inst.get(), lambda.empty() ? nullptr : lambda.data(), lambda.size(),
                              &opts, &solved, &json.s);
    if (st != CFM_OK) return report_error(st);
    if (!write_output(common.out, json.s)) return kFail;
    return solved ? kOk : kFail;
  }

  if (*fixed) {
    if (common.max_iter) opts.fp_max_iter = *common.max_iter;
    int converged = 0;
    cfm_status st = cfm_fixed_point(inst.get(), &opts, &converged, &json.s,
                                    common.trace.empty() ? nullptr : &csv.s);
    if (st != CFM_OK) return report_error(st);
    if (!common.trace.empty() && !write_output(common.trace, csv.s)) return kFail;
    if (!write_output(common.out, json.s)) return kFail;
    return converged ? kOk : kFail;
  }

  if (*check) {
    if (check_tol) opts.tol_clearing = opts.tol_budget = opts.tol_opt = *check_tol;
    if (tol_clearing) opts.tol_clearing = *tol_clearing;
    if (tol_budget) opts.tol_budget = *tol_budget;
    if (tol_opt) opts.tol_opt = *tol_opt;
    std::string prices, alloc;
    if (!literal_or_file(prices_arg, prices) || !literal_or_file(alloc_arg, alloc)) return kUsage;
    int pass = 0;
    cfm_status st = cfm_check_equilibrium_json(inst.get(), prices.c_str(), alloc.c_str(), &opts,
                                               &pass, &json.s);
    if (st != CFM_OK) return report_error(st);
    if (!write_output(common.out, json.s)) return kFail;
    std::cerr << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kOk : kFail;
  }
  return kUsage;
}
