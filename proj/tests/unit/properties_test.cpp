#include <gtest/gtest.h>

#include "support/properties.hpp"

namespace cfm::testing {
namespace {

void expect_clean(const PropertyOutcome& out) {
  EXPECT_GT(out.cases, 0u);
  EXPECT_EQ(out.failures, 0u) << out.first_failure;
}

TEST(Properties, DemandMatchesOracle) { expect_clean(demand_matches_oracle(101, 80, 1e-9)); }
TEST(Properties, SolverMatchesSearch) { expect_clean(bpsop_matches_search(102, 30, 1e-4)); }
TEST(Properties, HullIsConvexAndPriced) { expect_clean(hull_properties(103, 200)); }
TEST(Properties, DemandStructure) { expect_clean(demand_structure(104, 100)); }
TEST(Properties, ScalingHomogeneity) { expect_clean(scaling_homogeneity(105, 10, 1e-5)); }
TEST(Properties, TraceDeterminism) { expect_clean(trace_determinism(106, 3)); }
TEST(Properties, BudgetMonotonicity) { expect_clean(budget_monotonicity(107, 100)); }

}  // namespace
}  // namespace cfm::testing
