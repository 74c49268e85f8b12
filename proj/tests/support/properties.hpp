#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace cfm::testing {

struct PropertyOutcome {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void fail(std::string why) {
    if (failures++ == 0) first_failure = std::move(why);
  }
};

/// Greedy demand utility equals the vertex-enumeration optimum within tol
/// at random prices on random small instances.
PropertyOutcome demand_matches_oracle(std::uint64_t seed, std::size_t instances, double tol);

/// Program objective on random 2 x 2 one-type instances equals the
/// two-dimensional search optimum within tol (random lambda included).
PropertyOutcome bpsop_matches_search(std::uint64_t seed, std::size_t instances, double tol);

/// Frontier slopes strictly increase; delta sums reach the max-utility
/// vertex; random feasible mixtures cost at least the frontier.
PropertyOutcome hull_properties(std::uint64_t seed, std::size_t cases);

/// At most one type with two strictly fractional goods, every other type
/// holding at most one good; spend within budget; purchases form frontier
/// prefixes.
PropertyOutcome demand_structure(std::uint64_t seed, std::size_t cases);

/// Scaling budgets and lambda by c keeps x and scales p, r by c.
PropertyOutcome scaling_homogeneity(std::uint64_t seed, std::size_t cases, double tol);

/// Two fixed-point runs on the same input give identical traces.
PropertyOutcome trace_determinism(std::uint64_t seed, std::size_t cases);

/// Utility of the greedy demand is nondecreasing in the budget.
PropertyOutcome budget_monotonicity(std::uint64_t seed, std::size_t cases);

}  // namespace cfm::testing
