#include "cfm/frontier.hpp"

#include <algorithm>

#include "cfm/error.hpp"

namespace cfm {

namespace {

struct Point {
  double u;
  double p;
  std::optional<std::size_t> good;  // nullopt: origin
};

// Sign of the turn o -> a -> b in the (u, p) plane.
double cross(const Point& o, const Point& a, const Point& b) {
  return (a.u - o.u) * (b.p - o.p) - (a.p - o.p) * (b.u - o.u);
}

}  // namespace

int compare_slopes(const VirtualProduct& a, const VirtualProduct& b) noexcept {
  const double lhs = a.delta_p * b.delta_u;
  const double rhs = b.delta_p * a.delta_u;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

Frontier build_frontier(std::span<const double> u_row, std::span<const double> p,
                        const TypeSet& goods, std::optional<std::size_t> type) {
  Frontier out;
  out.type = type;

  std::vector<Point> pts;
  for (std::size_t j : goods) {
    if (j >= u_row.size() || j >= p.size()) {
      throw Error(Errc::invalid_argument, "good index out of range in frontier");
    }
    if (u_row[j] > 0.0) {
      pts.push_back({u_row[j], p[j], j});
    } else {
      out.dominated.push_back(j);
    }
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.p != b.p) return a.p < b.p;
    return *a.good < *b.good;
  });

  std::vector<Point> hull{{0.0, 0.0, std::nullopt}};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Point& q = pts[k];
    if (k > 0 && pts[k - 1].u == q.u) {
      out.dominated.push_back(*q.good);
      continue;
    }
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), q) <= 0.0) {
      out.dominated.push_back(*hull.back().good);
      hull.pop_back();
    }
    hull.push_back(q);
  }

  for (std::size_t k = 1; k < hull.size(); ++k) {
    VirtualProduct vp;
    vp.type = type;
    vp.lo = hull[k - 1].good;
    vp.hi = *hull[k].good;
    vp.delta_u = hull[k].u - hull[k - 1].u;
    vp.delta_p = hull[k].p - hull[k - 1].p;
    vp.slope = vp.delta_p / vp.delta_u;
    vp.free = vp.delta_p <= 0.0;
    out.products.push_back(vp);
  }
  std::sort(out.dominated.begin(), out.dominated.end());
  return out;
}

std::optional<VirtualProduct> untyped_rate(std::size_t good, double u, double p) {
  if (!(u > 0.0)) return std::nullopt;
  VirtualProduct vp;
  vp.hi = good;
  vp.delta_u = u;
  vp.delta_p = p;
  vp.slope = p / u;
  vp.unbounded = true;
  vp.free = p <= 0.0;
  return vp;
}

}  // namespace cfm
