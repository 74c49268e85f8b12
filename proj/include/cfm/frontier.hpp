#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cfm/market.hpp"

namespace cfm {

/// One segment of a type's lower price-utility frontier, or the constant
/// rate of an untyped good. Buying one unit moves the holding from `lo`
/// (nullopt: the origin, i.e. nothing) to `hi`.
struct VirtualProduct {
  std::optional<std::size_t> type;  ///< nullopt for an untyped good
  std::optional<std::size_t> lo;
  std::size_t hi = 0;
  double delta_u = 0.0;
  double delta_p = 0.0;
  double slope = 0.0;  ///< delta_p / delta_u
  bool unbounded = false;
  /// Untyped, valued and priced at or below zero: demand is unbounded.
  bool free = false;
};

struct Frontier {
  std::optional<std::size_t> type;
  /// Strictly increasing slopes, from the origin to the cheapest good of
  /// maximal utility.
  std::vector<VirtualProduct> products;
  /// Goods of the type that are not frontier vertices (zero-utility goods
  /// included).
  std::vector<std::size_t> dominated;
};

/// Lower convex hull of {(0,0)} and {(u_j, p_j) : j in goods, u_j > 0}.
/// Equal utilities keep the cheapest point (lowest index on full ties);
/// collinear vertices are merged into one segment. Slopes are compared by
/// cross-multiplication only.
Frontier build_frontier(std::span<const double> u_row, std::span<const double> p,
                        const TypeSet& goods, std::optional<std::size_t> type = std::nullopt);

/// Unbounded product of an untyped good; nullopt when u == 0.
std::optional<VirtualProduct> untyped_rate(std::size_t good, double u, double p);

/// a.slope < b.slope, evaluated without division.
int compare_slopes(const VirtualProduct& a, const VirtualProduct& b) noexcept;

}  // namespace cfm
