#include <gtest/gtest.h>

#include <vector>

#include "cfm/frontier.hpp"
#include "cfm/market.hpp"

namespace cfm {
namespace {

std::vector<double> slopes(const Frontier& f) {
  std::vector<double> out;
  for (const auto& v : f.products) out.push_back(v.slope);
  return out;
}

TEST(Frontier, WorkedExampleSlopes) {
  const auto inst = builtin_instance(Builtin::iop_ex1);
  const auto p = iop_example_prices();
  const auto odd = build_frontier(inst.utilities().row(0), p, {0, 2, 4}, 0);
  const auto even = build_frontier(inst.utilities().row(0), p, {1, 3, 5}, 1);
  const auto so = slopes(odd);
  const auto se = slopes(even);
  ASSERT_EQ(so.size(), 3u);
  ASSERT_EQ(se.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(so[k], 0.1 + 0.2 * k, 1e-12);
    EXPECT_NEAR(se[k], 0.2 + 0.2 * k, 1e-12);
  }
  EXPECT_FALSE(odd.products[0].lo.has_value());
  EXPECT_EQ(odd.products[0].hi, 0u);
  EXPECT_EQ(odd.products[1].lo, 0u);
  EXPECT_EQ(odd.products[1].hi, 2u);
  EXPECT_EQ(odd.products[0].type, 0u);
  EXPECT_TRUE(odd.dominated.empty());
}

TEST(Frontier, DominatedGoodsAreDropped) {
  // Good 1 lies above the hull, good 2 costs more for the same utility.
  const std::vector<double> u{1, 2, 1, 4};
  const std::vector<double> p{1, 5, 2, 5};
  const auto f = build_frontier(u, p, {0, 1, 2, 3});
  ASSERT_EQ(f.products.size(), 2u);
  EXPECT_EQ(f.products[0].hi, 0u);
  EXPECT_EQ(f.products[1].hi, 3u);
  EXPECT_NEAR(f.products[1].slope, 4.0 / 3.0, 1e-12);
  EXPECT_EQ(f.dominated, (std::vector<std::size_t>{1, 2}));
}

TEST(Frontier, SlopesIncreaseStrictly) {
  const std::vector<double> u{0.3, 0.9, 0.5, 0.7, 0.1};
  const std::vector<double> p{0.2, 3.0, 0.6, 1.1, 0.0};
  const auto f = build_frontier(u, p, {0, 1, 2, 3, 4});
  for (std::size_t k = 1; k < f.products.size(); ++k) {
    EXPECT_LT(f.products[k - 1].slope, f.products[k].slope);
    EXPECT_LT(compare_slopes(f.products[k - 1], f.products[k]), 0);
  }
}

TEST(Frontier, FreeGood) {
  const std::vector<double> u{1, 2};
  const std::vector<double> p{0, 1};
  const auto f = build_frontier(u, p, {0, 1});
  ASSERT_EQ(f.products.size(), 2u);
  EXPECT_TRUE(f.products[0].free);
  EXPECT_DOUBLE_EQ(f.products[0].slope, 0.0);
  EXPECT_DOUBLE_EQ(f.products[1].slope, 1.0);
}

TEST(Frontier, ZeroUtilityGoodsNeverAppear) {
  const std::vector<double> u{0, 0};
  const std::vector<double> p{1, 0};
  EXPECT_TRUE(build_frontier(u, p, {0, 1}).products.empty());
}

TEST(UntypedRate, Examples) {
  const auto r = untyped_rate(4, 5.0, 1.7);
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->slope, 0.34, 1e-12);
  EXPECT_TRUE(r->unbounded);
  EXPECT_FALSE(r->type.has_value());
  EXPECT_EQ(r->hi, 4u);

  const auto f = untyped_rate(0, 2.0, 0.0);
  ASSERT_TRUE(f.has_value());
  EXPECT_TRUE(f->free);
  EXPECT_FALSE(untyped_rate(0, 0.0, 1.0).has_value());
}

}  // namespace
}  // namespace cfm
