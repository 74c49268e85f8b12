#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cfm/frontier.hpp"
#include "cfm/market.hpp"

namespace cfm {

/// Order of virtual products with equal slope. `standard` ranks by type
/// index (untyped last) then good index; `reversed` inverts that ranking.
enum class TieBreak { standard, reversed };

struct Purchase {
  VirtualProduct product;
  double units = 0.0;  ///< in [0, 1] unless the product is unbounded
  double cost = 0.0;
};

struct DemandResult {
  std::vector<double> x;
  double spend = 0.0;
  double utility = 0.0;
  /// Slope of the last product bought; 0 when nothing was bought.
  double alpha_star = 0.0;
  bool budget_exhausted = false;
  std::vector<std::size_t> tight_types;
  std::vector<Purchase> purchases;
};

/// Greedy optimum of the individual problem for one agent: products from
/// every constrained type's frontier plus untyped rates, bought in ascending
/// slope. `constrained[t]` false makes type t's goods untyped for the agent.
/// Throws Errc::unbounded_demand when a valued untyped good is free.
DemandResult solve_iop(std::span<const double> u_row, double budget,
                       std::span<const double> p, const std::vector<TypeSet>& types,
                       const std::vector<bool>& constrained,
                       TieBreak tie = TieBreak::standard);

/// Throws Errc::invalid_argument on a bad agent index or price length.
DemandResult demand(const MarketInstance& inst, std::size_t agent, std::span<const double> p,
                    TieBreak tie = TieBreak::standard);

struct MarketDemand {
  Allocation x;
  /// f[j] = sum_i x[i][j] - capacity[j]
  std::vector<double> excess;
  std::vector<DemandResult> agents;
};

/// Errc::unbounded_demand names the offending agent (1-based).
MarketDemand demand_all(const MarketInstance& inst, std::span<const double> p,
                        TieBreak tie = TieBreak::standard);

}  // namespace cfm
