#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfm {

/// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Throws Errc::dimension_mismatch on ragged input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<const double> data() const noexcept { return data_; }
  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

using PriceVector = std::vector<double>;
/// x(i, j): units of good j held by agent i.
using Allocation = Matrix;
using TypeSet = std::vector<std::size_t>;

/// A Fisher market with linear utilities, per-good capacities and per-agent
/// physical constraints: for every type t an agent participates in, the
/// agent's holdings of the goods in t sum to at most one unit.
///
/// Immutable after construction. The constructor only checks shapes; semantic
/// invariants (disjoint types, positive budgets, ...) are reported by
/// validate_instance().
class MarketInstance {
 public:
  MarketInstance() = default;

  /// `participation` may be empty (every agent participates in every type);
  /// otherwise it must be n_agents x types.size(). Throws
  /// Errc::dimension_mismatch on inconsistent shapes.
  MarketInstance(Matrix utilities, std::vector<double> budgets,
                 std::vector<double> capacities, std::vector<TypeSet> types,
                 std::vector<std::vector<bool>> participation = {});

  std::size_t n_agents() const noexcept { return utilities_.rows(); }
  std::size_t n_goods() const noexcept { return utilities_.cols(); }
  std::size_t n_types() const noexcept { return types_.size(); }

  const Matrix& utilities() const noexcept { return utilities_; }
  double utility(std::size_t i, std::size_t j) const { return utilities_(i, j); }
  const std::vector<double>& budgets() const noexcept { return budgets_; }
  double budget(std::size_t i) const { return budgets_[i]; }
  const std::vector<double>& capacities() const noexcept { return capacities_; }
  double capacity(std::size_t j) const { return capacities_[j]; }
  const std::vector<TypeSet>& types() const noexcept { return types_; }
  const TypeSet& type(std::size_t t) const { return types_[t]; }
  const std::vector<std::vector<bool>>& participation() const noexcept {
    return participation_;
  }
  bool participates(std::size_t i, std::size_t t) const { return participation_[i][t]; }

  /// Type containing good j (first match if types overlap), or nullopt when
  /// the good is untyped.
  std::optional<std::size_t> type_of(std::size_t j) const { return type_of_[j]; }

  /// Number of agents constrained by type t.
  std::size_t participants(std::size_t t) const;
  /// Sum of capacities of the goods in type t.
  double type_capacity(std::size_t t) const;

  /// Copy with budgets replaced (used for budget perturbation and scaling).
  MarketInstance with_budgets(std::vector<double> budgets) const;

  bool operator==(const MarketInstance& other) const;

 private:
  Matrix utilities_;
  std::vector<double> budgets_;
  std::vector<double> capacities_;
  std::vector<TypeSet> types_;
  std::vector<std::vector<bool>> participation_;
  std::vector<std::optional<std::size_t>> type_of_;
};

struct Issue {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> errors;
  std::vector<Issue> warnings;
  /// Types whose capacity exactly fills the caps of all (participating)
  /// agents, forcing every per-agent constraint to hold with equality.
  std::vector<std::size_t> degenerate_tight_types;

  bool ok() const noexcept { return errors.empty(); }
  bool has_error(std::string_view code) const;
  bool has_warning(std::string_view code) const;
};

/// Checks every hard invariant and collects advisory warnings. Messages use
/// 1-based agent/good/type indices.
ValidationReport validate_instance(const MarketInstance& inst);

/// A type is degenerate-tight when every agent participates in it and its
/// capacity equals the number of agents: all of its constraints must bind.
bool is_degenerate_tight(const MarketInstance& inst, std::size_t t);

/// True when no feasible allocation exists: some type's capacity exceeds the
/// caps of its participants and no non-participant can absorb the excess.
bool is_type_infeasible(const MarketInstance& inst, std::size_t t);

enum class Builtin { prop1, prop2, iop_ex1, iop_ex2, experiment };

/// Throws Errc::unknown_name.
Builtin parse_builtin(std::string_view name);
std::string_view to_string(Builtin b) noexcept;

/// Instances from the worked examples. `seed` only affects `experiment`.
MarketInstance builtin_instance(Builtin which, std::uint64_t seed = 1);
MarketInstance builtin_instance(std::string_view name, std::uint64_t seed = 1);

/// Prices of the single-agent worked examples (iop_ex1 / iop_ex2).
PriceVector iop_example_prices();
/// The allocation shared by both reference prop2 equilibria.
Allocation prop2_reference_allocation();

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct RandomSpec {
  std::uint64_t seed = 1;
  std::size_t n_agents = 0;
  std::size_t n_goods = 0;
  std::vector<TypeSet> types;
  Range budgets{1.0, 10.0};
  Range utilities{0.1, 1.0};
  /// Fixed capacity for every good. When unset, a good in type t gets
  /// n_agents / |t| (the type exactly fills the per-agent caps) and an untyped
  /// good gets n_agents / 2.
  std::optional<double> capacity;
};

/// Uniform draws (utilities row-major, then budgets) from a 64-bit Mersenne
/// Twister; a pure function of the spec. Throws Errc::invalid_argument on
/// non-positive or inverted ranges and on a bad type spec.
MarketInstance random_instance(const RandomSpec& spec);

/// `count` types of `size` consecutive goods starting at good 0.
std::vector<TypeSet> consecutive_types(std::size_t count, std::size_t size);

/// Parses "KxS" (K types of S consecutive goods) or "none".
std::vector<TypeSet> parse_type_spec(std::string_view spec);

}  // namespace cfm
