#include "cfm/market.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "cfm/error.hpp"

namespace cfm {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != out.cols()) {
      throw Error(Errc::dimension_mismatch,
                  "row " + std::to_string(i + 1) + " has " +
                      std::to_string(rows[i].size()) + " entries, expected " +
                      std::to_string(out.cols()));
    }
    std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
  }
  return out;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

MarketInstance::MarketInstance(Matrix utilities, std::vector<double> budgets,
                               std::vector<double> capacities,
                               std::vector<TypeSet> types,
                               std::vector<std::vector<bool>> participation)
    : utilities_(std::move(utilities)),
      budgets_(std::move(budgets)),
      capacities_(std::move(capacities)),
      types_(std::move(types)),
      participation_(std::move(participation)) {
  const std::size_t n = utilities_.rows();
  const std::size_t m = utilities_.cols();
  if (budgets_.size() != n) {
    throw Error(Errc::dimension_mismatch, "expected " + std::to_string(n) +
                                              " budgets, got " +
                                              std::to_string(budgets_.size()));
  }
  if (capacities_.size() != m) {
    throw Error(Errc::dimension_mismatch, "expected " + std::to_string(m) +
                                              " capacities, got " +
                                              std::to_string(capacities_.size()));
  }
  if (participation_.empty()) {
    participation_.assign(n, std::vector<bool>(types_.size(), true));
  } else {
    if (participation_.size() != n) {
      throw Error(Errc::dimension_mismatch,
                  "participation must have one row per agent");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (participation_[i].size() != types_.size()) {
        throw Error(Errc::dimension_mismatch,
                    "participation row " + std::to_string(i + 1) +
                        " must have one entry per type");
      }
    }
  }
  type_of_.assign(m, std::nullopt);
  for (std::size_t t = 0; t < types_.size(); ++t) {
    for (std::size_t j : types_[t]) {
      if (j < m && !type_of_[j]) type_of_[j] = t;
    }
  }
}

std::size_t MarketInstance::participants(std::size_t t) const {
  std::size_t count = 0;
  for (const auto& row : participation_) count += row[t] ? 1 : 0;
  return count;
}

double MarketInstance::type_capacity(std::size_t t) const {
  double total = 0.0;
  for (std::size_t j : types_[t]) {
    if (j < capacities_.size()) total += capacities_[j];
  }
  return total;
}

MarketInstance MarketInstance::with_budgets(std::vector<double> budgets) const {
  return MarketInstance(utilities_, std::move(budgets), capacities_, types_,
                        participation_);
}

bool MarketInstance::operator==(const MarketInstance& other) const {
  return utilities_ == other.utilities_ && budgets_ == other.budgets_ &&
         capacities_ == other.capacities_ && types_ == other.types_ &&
         participation_ == other.participation_;
}

bool ValidationReport::has_error(std::string_view code) const {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const Issue& e) { return e.code == code; });
}

bool ValidationReport::has_warning(std::string_view code) const {
  return std::any_of(warnings.begin(), warnings.end(),
                     [&](const Issue& w) { return w.code == code; });
}

bool is_degenerate_tight(const MarketInstance& inst, std::size_t t) {
  const std::size_t k = inst.participants(t);
  return k == inst.n_agents() && k > 0 &&
         inst.type_capacity(t) == static_cast<double>(k);
}

bool is_type_infeasible(const MarketInstance& inst, std::size_t t) {
  const std::size_t k = inst.participants(t);
  return k == inst.n_agents() && inst.type_capacity(t) > static_cast<double>(k);
}

namespace {

std::string one_based(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

ValidationReport validate_instance(const MarketInstance& inst) {
  ValidationReport rep;
  const std::size_t n = inst.n_agents();
  const std::size_t m = inst.n_goods();
  auto error = [&](std::string code, std::string msg) {
    rep.errors.push_back({std::move(code), std::move(msg)});
  };
  auto warn = [&](std::string code, std::string msg) {
    rep.warnings.push_back({std::move(code), std::move(msg)});
  };

  if (n == 0) error("no agents", "instance has no agents");
  if (m == 0) error("no goods", "instance has no goods");

  bool finite = true;
  for (double v : inst.utilities().data()) finite = finite && std::isfinite(v);
  for (double v : inst.budgets()) finite = finite && std::isfinite(v);
  for (double v : inst.capacities()) finite = finite && std::isfinite(v);
  if (!finite) error("non-finite value", "utilities, budgets and capacities must be finite");

  for (std::size_t i = 0; i < n; ++i) {
    bool values_something = false;
    for (std::size_t j = 0; j < m; ++j) {
      const double u = inst.utility(i, j);
      if (u < 0.0) {
        error("negative utility", "u[" + one_based(i) + "][" + one_based(j) +
                                      "] is negative");
      }
      values_something = values_something || u > 0.0;
    }
    if (!values_something) {
      error("agent values nothing", "agent " + one_based(i) + " has no good with positive utility");
    }
    if (!(inst.budget(i) > 0.0)) {
      error("nonpositive budget", "budget of agent " + one_based(i) + " must be positive");
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!(inst.capacity(j) > 0.0)) {
      error("nonpositive capacity", "capacity of good " + one_based(j) + " must be positive");
    }
  }

  std::vector<int> owner(m, -1);
  bool types_well_formed = true;
  for (std::size_t t = 0; t < inst.n_types(); ++t) {
    const TypeSet& goods = inst.type(t);
    if (goods.empty()) warn("empty-type", "type " + one_based(t) + " contains no goods");
    for (std::size_t j : goods) {
      if (j >= m) {
        error("type index out of range", "type " + one_based(t) + " refers to good " +
                                             one_based(j) + " but there are " +
                                             std::to_string(m) + " goods");
        types_well_formed = false;
        continue;
      }
      if (owner[j] == static_cast<int>(t)) {
        error("duplicate good in type", "good " + one_based(j) + " listed twice in type " + one_based(t));
        types_well_formed = false;
      } else if (owner[j] >= 0) {
        if (!rep.has_error("types overlap")) {
          error("types overlap", "good " + one_based(j) + " belongs to types " +
                                     one_based(static_cast<std::size_t>(owner[j])) +
                                     " and " + one_based(t));
        }
        types_well_formed = false;
      } else {
        owner[j] = static_cast<int>(t);
      }
    }
  }

  if (types_well_formed && finite) {
    for (std::size_t t = 0; t < inst.n_types(); ++t) {
      const double cap = inst.type_capacity(t);
      const std::size_t k = inst.participants(t);
      std::ostringstream msg;
      msg << "type " << one_based(t) << " capacity " << cap << " vs " << k
          << " participating agents";
      if (is_type_infeasible(inst, t)) {
        error("type capacity infeasible", msg.str() + "; goods cannot be cleared");
      } else if (cap > static_cast<double>(k)) {
        warn("type-capacity-exceeds-caps",
             msg.str() + "; clearing relies on non-participating agents");
      } else if (is_degenerate_tight(inst, t)) {
        rep.degenerate_tight_types.push_back(t);
        warn("degenerate-tight-type",
             msg.str() + "; every agent must hold exactly one unit of this type");
      }
    }
  }

  bool any_untyped = false;
  for (std::size_t j = 0; j < m; ++j) {
    if (owner[j] < 0) any_untyped = true;
    bool valued = false;
    for (std::size_t i = 0; i < n; ++i) valued = valued || inst.utility(i, j) > 0.0;
    if (!valued) warn("unvalued-good", "no agent values good " + one_based(j));
  }
  if (!any_untyped && m > 0) {
    warn("no-untyped-good",
         "every good belongs to a type; equilibrium existence is not guaranteed");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < inst.n_types(); ++t) {
      if (inst.participates(i, t)) continue;
      for (std::size_t j : inst.type(t)) {
        if (j < m && inst.utility(i, j) > 0.0) {
          warn("valued-nonparticipating-type",
               "agent " + one_based(i) + " values goods of type " + one_based(t) +
                   " without being constrained by it; purchases are unbounded by type");
          break;
        }
      }
    }
  }
  return rep;
}

Builtin parse_builtin(std::string_view name) {
  if (name == "prop1") return Builtin::prop1;
  if (name == "prop2") return Builtin::prop2;
  if (name == "iop_ex1") return Builtin::iop_ex1;
  if (name == "iop_ex2") return Builtin::iop_ex2;
  if (name == "experiment") return Builtin::experiment;
  throw Error(Errc::unknown_name, "unknown builtin instance '" + std::string(name) +
                                      "' (expected prop1, prop2, iop_ex1, iop_ex2, experiment)");
}

std::string_view to_string(Builtin b) noexcept {
  switch (b) {
    case Builtin::prop1: return "prop1";
    case Builtin::prop2: return "prop2";
    case Builtin::iop_ex1: return "iop_ex1";
    case Builtin::iop_ex2: return "iop_ex2";
    case Builtin::experiment: return "experiment";
  }
  return "?";
}

PriceVector iop_example_prices() { return {0.1, 0.4, 0.7, 1.2, 1.7, 2.4}; }

Allocation prop2_reference_allocation() {
  return Matrix::from_rows({{1, 0, 1}, {0, 1, 0}, {0, 1, 0}});
}

MarketInstance builtin_instance(Builtin which, std::uint64_t seed) {
  switch (which) {
    case Builtin::prop1:
      return MarketInstance(Matrix::from_rows({{200, 0.1}, {100, 1.1}}), {15, 5},
                            {1.5, 0.5}, {{0, 1}});
    case Builtin::prop2:
      return MarketInstance(Matrix::from_rows({{100, 1, 2}, {1, 100, 1}, {1, 100, 1}}),
                            {20, 10, 10}, {1, 2, 1}, {{0, 1}});
    case Builtin::iop_ex1:
      // Single agent; each type exactly fills the agent's cap.
      return MarketInstance(Matrix::from_rows({{1, 2, 3, 4, 5, 6}}), {2.4},
                            {1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3},
                            {{0, 2, 4}, {1, 3, 5}});
    case Builtin::iop_ex2:
      return MarketInstance(Matrix::from_rows({{1, 2, 3, 4, 5, 6}}), {4.5},
                            {0.5, 1.0 / 3, 0.5, 1.0 / 3, 2.0, 1.0 / 3},
                            {{0, 2}, {1, 3, 5}});
    case Builtin::experiment: {
      RandomSpec spec;
      spec.seed = seed;
      spec.n_agents = 200;
      spec.n_goods = 6;
      spec.types = consecutive_types(3, 2);
      spec.budgets = {1.0, 10.0};
      spec.utilities = {0.1, 1.0};
      spec.capacity = 100.0;
      return random_instance(spec);
    }
  }
  throw Error(Errc::unknown_name, "unknown builtin");
}

MarketInstance builtin_instance(std::string_view name, std::uint64_t seed) {
  return builtin_instance(parse_builtin(name), seed);
}

std::vector<TypeSet> consecutive_types(std::size_t count, std::size_t size) {
  std::vector<TypeSet> types(count);
  for (std::size_t t = 0; t < count; ++t) {
    for (std::size_t k = 0; k < size; ++k) types[t].push_back(t * size + k);
  }
  return types;
}

std::vector<TypeSet> parse_type_spec(std::string_view spec) {
  if (spec.empty() || spec == "none") return {};
  const auto x = spec.find('x');
  if (x == std::string_view::npos) {
    throw Error(Errc::invalid_argument, "type spec must look like KxS, got '" + std::string(spec) + "'");
  }
  std::size_t count = 0;
  std::size_t size = 0;
  const auto a = spec.substr(0, x);
  const auto b = spec.substr(x + 1);
  const auto ra = std::from_chars(a.data(), a.data() + a.size(), count);
  const auto rb = std::from_chars(b.data(), b.data() + b.size(), size);
  if (ra.ec != std::errc{} || ra.ptr != a.data() + a.size() || rb.ec != std::errc{} ||
      rb.ptr != b.data() + b.size() || size == 0) {
    throw Error(Errc::invalid_argument, "type spec must look like KxS, got '" + std::string(spec) + "'");
  }
  return consecutive_types(count, size);
}

namespace {

// 53-bit uniform in [0, 1); the mapping is fixed so draws are identical
// across standard library implementations.
double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void check_range(const Range& r, const char* what) {
  if (!(r.lo > 0.0) || !(r.hi >= r.lo) || !std::isfinite(r.hi)) {
    throw Error(Errc::invalid_argument,
                std::string(what) + " range must satisfy 0 < lo <= hi");
  }
}

}  // namespace

MarketInstance random_instance(const RandomSpec& spec) {
  check_range(spec.budgets, "budget");
  check_range(spec.utilities, "utility");
  if (spec.n_agents == 0 || spec.n_goods == 0) {
    throw Error(Errc::invalid_argument, "random instance needs at least one agent and one good");
  }
  if (spec.capacity && !(*spec.capacity > 0.0)) {
    throw Error(Errc::invalid_argument, "capacity must be positive");
  }
  std::vector<int> owner(spec.n_goods, -1);
  for (std::size_t t = 0; t < spec.types.size(); ++t) {
    if (spec.types[t].empty()) {
      throw Error(Errc::invalid_argument, "type " + one_based(t) + " is empty");
    }
    for (std::size_t j : spec.types[t]) {
      if (j >= spec.n_goods) {
        throw Error(Errc::invalid_argument, "type spec refers to good " + one_based(j) +
                                                " but only " + std::to_string(spec.n_goods) +
                                                " goods exist");
      }
      if (owner[j] >= 0) {
        throw Error(Errc::invalid_argument, "type spec does not partition the goods: good " +
                                                one_based(j) + " repeated");
      }
      owner[j] = static_cast<int>(t);
    }
  }

  std::mt19937_64 gen(spec.seed);
  Matrix u(spec.n_agents, spec.n_goods);
  for (std::size_t i = 0; i < spec.n_agents; ++i) {
    for (std::size_t j = 0; j < spec.n_goods; ++j) {
      u(i, j) = spec.utilities.lo + (spec.utilities.hi - spec.utilities.lo) * unit_draw(gen);
    }
  }
  std::vector<double> w(spec.n_agents);
  for (double& b : w) b = spec.budgets.lo + (spec.budgets.hi - spec.budgets.lo) * unit_draw(gen);

  const double n = static_cast<double>(spec.n_agents);
  std::vector<double> caps(spec.n_goods);
  for (std::size_t j = 0; j < spec.n_goods; ++j) {
    if (spec.capacity) {
      caps[j] = *spec.capacity;
    } else if (owner[j] >= 0) {
      caps[j] = n / static_cast<double>(spec.types[static_cast<std::size_t>(owner[j])].size());
    } else {
      caps[j] = n / 2.0;
    }
  }
  return MarketInstance(std::move(u), std::move(w), std::move(caps), spec.types);
}

}  // namespace cfm
