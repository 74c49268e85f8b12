#include "cfm/demand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cfm/error.hpp"

namespace cfm {

namespace {

// Rank used to order equal-slope products.
std::pair<std::size_t, std::size_t> tie_key(const VirtualProduct& vp) {
  return {vp.type ? *vp.type : std::numeric_limits<std::size_t>::max(),
          vp.lo ? std::min(*vp.lo, vp.hi) : vp.hi};
}

}  // namespace

DemandResult solve_iop(std::span<const double> u_row, double budget,
                       std::span<const double> p, const std::vector<TypeSet>& types,
                       const std::vector<bool>& constrained, TieBreak tie) {
  const std::size_t m = u_row.size();
  if (p.size() != m) throw Error(Errc::dimension_mismatch, "price vector length differs from goods");
  if (constrained.size() != types.size()) {
    throw Error(Errc::dimension_mismatch, "participation length differs from types");
  }

  std::vector<bool> typed(m, false);
  std::vector<VirtualProduct> products;
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (!constrained[t]) continue;
    for (std::size_t j : types[t]) typed[j] = true;
    Frontier f = build_frontier(u_row, p, types[t], t);
    products.insert(products.end(), f.products.begin(), f.products.end());
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (typed[j]) continue;
    if (auto vp = untyped_rate(j, u_row[j], p[j])) {
      if (vp->free) {
        throw Error(Errc::unbounded_demand,
                    "good " + std::to_string(j + 1) + " is valued, unconstrained and free");
      }
      products.push_back(*vp);
    }
  }

  std::stable_sort(products.begin(), products.end(),
                   [tie](const VirtualProduct& a, const VirtualProduct& b) {
                     if (int c = compare_slopes(a, b); c != 0) return c < 0;
                     return tie == TieBreak::standard ? tie_key(a) < tie_key(b)
                                                      : tie_key(b) < tie_key(a);
                   });

  DemandResult res;
  res.x.assign(m, 0.0);
  double remaining = budget;
  bool stopped_by_budget = false;
  for (const VirtualProduct& vp : products) {
    Purchase buy{vp, 0.0, 0.0};
    if (vp.delta_p <= 0.0) {
      buy.units = 1.0;
      buy.cost = vp.delta_p;
    } else if (remaining <= 0.0) {
      stopped_by_budget = true;
      break;
    } else if (vp.unbounded) {
      buy.units = remaining / vp.delta_p;
      buy.cost = remaining;
      stopped_by_budget = true;
    } else if (vp.delta_p <= remaining) {
      buy.units = 1.0;
      buy.cost = vp.delta_p;
    } else {
      buy.units = remaining / vp.delta_p;
      buy.cost = remaining;
      stopped_by_budget = true;
    }
    remaining -= buy.cost;
    res.purchases.push_back(buy);
    res.alpha_star = vp.slope;
    if (stopped_by_budget) {
      remaining = 0.0;
      break;
    }
  }

  // Within a type the bought products form a prefix of its frontier: the
  // holding sits at the last full vertex, or splits across the partial one.
  std::vector<const Purchase*> last(types.size(), nullptr);
  for (const Purchase& b : res.purchases) {
    if (b.product.type) {
      last[*b.product.type] = &b;
    } else {
      res.x[b.product.hi] += b.units;
    }
  }
  for (std::size_t t = 0; t < types.size(); ++t) {
    const Purchase* b = last[t];
    if (!b) continue;
    if (b->units >= 1.0) {
      res.x[b->product.hi] += 1.0;
    } else {
      res.x[b->product.hi] += b->units;
      if (b->product.lo) res.x[*b->product.lo] += 1.0 - b->units;
    }
  }

  for (std::size_t j = 0; j < m; ++j) {
    res.spend += p[j] * res.x[j];
    res.utility += u_row[j] * res.x[j];
  }
  res.budget_exhausted = stopped_by_budget || remaining <= 0.0;
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (!constrained[t]) continue;
    double sum = 0.0;
    for (std::size_t j : types[t]) sum += res.x[j];
    if (sum >= 1.0 - 1e-12) res.tight_types.push_back(t);
  }
  return res;
}

DemandResult demand(const MarketInstance& inst, std::size_t agent, std::span<const double> p,
                    TieBreak tie) {
  if (agent >= inst.n_agents()) {
    throw Error(Errc::invalid_argument, "agent " + std::to_string(agent + 1) + " does not exist");
  }
  if (p.size() != inst.n_goods()) {
    throw Error(Errc::dimension_mismatch, "expected " + std::to_string(inst.n_goods()) +
                                              " prices, got " + std::to_string(p.size()));
  }
  for (double v : p) {
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "prices must be finite");
  }
  return solve_iop(inst.utilities().row(agent), inst.budget(agent), p, inst.types(),
                   inst.participation()[agent], tie);
}

MarketDemand demand_all(const MarketInstance& inst, std::span<const double> p, TieBreak tie) {
  MarketDemand out;
  out.x = Allocation(inst.n_agents(), inst.n_goods());
  out.excess.assign(inst.n_goods(), 0.0);
  for (std::size_t i = 0; i < inst.n_agents(); ++i) {
    DemandResult d;
    try {
      d = demand(inst, i, p, tie);
    } catch (const Error& e) {
      if (e.code() != Errc::unbounded_demand) throw;
      throw Error(Errc::unbounded_demand, "agent " + std::to_string(i + 1) + ": " + e.what());
    }
    std::copy(d.x.begin(), d.x.end(), out.x.row(i).begin());
    out.agents.push_back(std::move(d));
  }
  for (std::size_t j = 0; j < inst.n_goods(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < inst.n_agents(); ++i) sum += out.x(i, j);
    out.excess[j] = sum - inst.capacity(j);
  }
  return out;
}

}  // namespace cfm
