#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cfm/demand.hpp"
#include "cfm/market.hpp"

namespace cfm::testing {

/// Exact optimum of the individual problem by enumerating the vertices of
/// {x >= 0, p.x <= w, sum_{j in t} x_j <= 1 for constrained t}. Only x and
/// utility/spend are filled. Throws Errc::invalid_argument for m > 6 and
/// Errc::unbounded_demand when a valued unconstrained good is free.
DemandResult brute_force_demand(const MarketInstance& inst, std::size_t agent,
                                std::span<const double> p);

/// Same optimum searched on a grid: every x_j in {0, step, 2 step, ...} up to
/// its bound (1 if constrained, else w / p_j). For tiny m only.
DemandResult grid_demand(const MarketInstance& inst, std::size_t agent,
                         std::span<const double> p, double step);

struct TwoByTwo {
  double objective;
  double x11;
  double x12;
};

/// Maximum of sum_i (w_i + lambda_i) log U_i for n = 2, m = 2 over the
/// feasible polygon in (x11, x12), by a coarse grid followed by nested
/// golden-section search.
TwoByTwo bpsop_two_by_two(const MarketInstance& inst, std::span<const double> lambda);

/// Small random instance: n <= 3, m <= 4, random disjoint types (possibly
/// none), random participation, utilities in [0, 1] with some zeros.
MarketInstance small_random_instance(std::mt19937_64& rng);

/// Random prices for small_random_instance, with occasional zero prices on
/// typed goods.
PriceVector small_random_prices(std::mt19937_64& rng, const MarketInstance& inst);

/// n = 2, m = 2 instance with both goods in one type, strictly feasible.
MarketInstance random_two_by_two(std::mt19937_64& rng);

}  // namespace cfm::testing
