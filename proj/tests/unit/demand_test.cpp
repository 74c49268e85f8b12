#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "cfm/demand.hpp"
#include "cfm/error.hpp"
#include "cfm/market.hpp"
#include "support/oracles.hpp"

namespace cfm {
namespace {

void expect_vec(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], tol) << "entry " << k;
}

TEST(Demand, FirstWorkedExample) {
  const auto inst = builtin_instance(Builtin::iop_ex1);
  const auto d = demand(inst, 0, iop_example_prices());
  expect_vec(d.x, {0, 0, 0.5, 1, 0.5, 0}, 1e-12);
  EXPECT_NEAR(d.spend, 2.4, 1e-12);
  EXPECT_NEAR(d.utility, 8.0, 1e-12);
  EXPECT_NEAR(d.alpha_star, 0.5, 1e-12);
  EXPECT_TRUE(d.budget_exhausted);
  ASSERT_EQ(d.purchases.size(), 5u);
  EXPECT_NEAR(d.purchases.back().units, 0.5, 1e-12);
  EXPECT_EQ(d.tight_types, (std::vector<std::size_t>{0, 1}));
}

TEST(Demand, SecondWorkedExample) {
  const auto inst = builtin_instance(Builtin::iop_ex2);
  const auto d = demand(inst, 0, iop_example_prices());
  expect_vec(d.x, {0, 1, 1, 0, 2, 0}, 1e-12);
  EXPECT_NEAR(d.spend, 4.5, 1e-12);
  EXPECT_NEAR(d.alpha_star, 0.34, 1e-12);
  ASSERT_EQ(d.purchases.size(), 4u);
  EXPECT_TRUE(d.purchases.back().product.unbounded);
  EXPECT_NEAR(d.purchases.back().units, 2.0, 1e-12);
}

TEST(Demand, Prop2BuyersAtBothPrices) {
  const auto inst = builtin_instance(Builtin::prop2);
  for (const PriceVector& p : {PriceVector{11, 10, 9}, PriceVector{10, 10, 10}}) {
    const auto d0 = demand(inst, 0, p);
    expect_vec(d0.x, {1, 0, 1}, 1e-12);
    EXPECT_NEAR(d0.spend, 20.0, 1e-12);
    const auto all = demand_all(inst, p);
    for (double f : all.excess) EXPECT_NEAR(f, 0.0, 1e-12);
    EXPECT_EQ(all.x, prop2_reference_allocation());
  }
}

TEST(Demand, Prop1HasExcessSupply) {
  const auto inst = builtin_instance(Builtin::prop1);
  const PriceVector p{12, 1};
  const auto d = demand_all(inst, p);
  EXPECT_LT(d.excess[0], 0.0);
}

TEST(Demand, UnboundedOnFreeUntypedGood) {
  const MarketInstance inst(Matrix::from_rows({{1, 1}}), {1}, {1, 1}, {{0}});
  const PriceVector p{1, 0};
  try {
    demand(inst, 0, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unbounded_demand);
  }
}

TEST(Demand, FreeTypedGoodIsTaken) {
  const MarketInstance inst(Matrix::from_rows({{1, 2}}), {1}, {1, 1}, {{0, 1}});
  const PriceVector p{0, 0};
  const auto d = demand(inst, 0, p);
  expect_vec(d.x, {0, 1}, 1e-12);
  EXPECT_FALSE(d.budget_exhausted);
}

TEST(Demand, NonParticipantIsUnconstrainedInType) {
  const MarketInstance inst(Matrix::from_rows({{1, 1}, {1, 1}}), {4, 4}, {3, 1}, {{0, 1}},
                            {{true}, {false}});
  const PriceVector p{1, 2};
  expect_vec(demand(inst, 0, p).x, {1, 0}, 1e-12);
  expect_vec(demand(inst, 1, p).x, {4, 0}, 1e-12);
}

TEST(Demand, TieBreakOrdersEqualSlopes) {
  // Two untyped goods at the same rate: the budget goes to one end.
  const MarketInstance inst(Matrix::from_rows({{1, 1}}), {2}, {1, 1}, {});
  const PriceVector p{1, 1};
  expect_vec(demand(inst, 0, p, TieBreak::standard).x, {2, 0}, 1e-12);
  expect_vec(demand(inst, 0, p, TieBreak::reversed).x, {0, 2}, 1e-12);
}

TEST(Demand, RejectsBadInput) {
  const auto inst = builtin_instance(Builtin::prop2);
  const PriceVector short_p{1, 2};
  EXPECT_THROW(demand(inst, 0, short_p), Error);
  const PriceVector p{1, 2, 3};
  EXPECT_THROW(demand(inst, 5, p), Error);
}

TEST(Demand, MatchesVertexEnumeration) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 60; ++k) {
    const auto inst = testing::small_random_instance(rng);
    const auto p = testing::small_random_prices(rng, inst);
    for (std::size_t i = 0; i < inst.n_agents(); ++i) {
      DemandResult got;
      try {
        got = demand(inst, i, p);
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), Errc::unbounded_demand);
        continue;
      }
      const auto want = testing::brute_force_demand(inst, i, p);
      EXPECT_NEAR(got.utility, want.utility, 1e-9 * (1.0 + want.utility)) << "case " << k;
      EXPECT_LE(got.spend, inst.budget(i) + 1e-9);
    }
  }
}

}  // namespace
}  // namespace cfm
