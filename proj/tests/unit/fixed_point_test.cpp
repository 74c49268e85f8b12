#include <gtest/gtest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "cfm/fixed_point.hpp"
#include "cfm/market.hpp"
#include "cfm/verifier.hpp"

namespace cfm {
namespace {

TEST(FixedPoint, ResidualIsEuclidean) {
  const std::vector<double> lambda{3, 4};
  const std::vector<double> q{0, 0};
  EXPECT_DOUBLE_EQ(fixed_point_residual(lambda, q), 5.0);
  const Matrix r = Matrix::from_rows({{1, 2}, {0, 4}});
  EXPECT_EQ(row_sums(r), (std::vector<double>{3, 4}));
  EXPECT_DOUBLE_EQ(fixed_point_residual(lambda, r), 0.0);
}

TEST(FixedPoint, NoTypesConvergesImmediately) {
  const MarketInstance inst(Matrix::from_rows({{1, 2}, {3, 1}}), {1, 2}, {1, 1}, {});
  const auto fp = run_fixed_point(inst);
  EXPECT_EQ(fp.trace.status, FixedPointStatus::converged);
  EXPECT_EQ(fp.trace.residuals.size(), 1u);
  EXPECT_EQ(fp.lambda, (std::vector<double>{0, 0}));
}

TEST(FixedPoint, Prop2ReachesAnEquilibrium) {
  const auto inst = builtin_instance(Builtin::prop2);
  const auto fp = run_fixed_point(inst);
  ASSERT_EQ(fp.trace.status, FixedPointStatus::converged) << fp.trace.message;
  EXPECT_LE(fp.trace.residuals.back(), 1e-6);
  EXPECT_TRUE(check_equilibrium(inst, fp.p, fp.x, {1e-5, 1e-5, 1e-5}).pass);
  const auto cc = kkt_crosscheck(inst, fp.lambda, fp.x, fp.p, fp.duals.r);
  EXPECT_TRUE(cc.pass) << cc.max();
}

// Three tight types of two goods plus one untyped good.
TEST(FixedPoint, TypedMarketWithOutsideGood) {
  for (std::uint64_t seed : {1, 2, 3}) {
    RandomSpec spec;
    spec.seed = seed;
    spec.n_agents = 10;
    spec.n_goods = 7;
    spec.types = consecutive_types(3, 2);
    const auto inst = random_instance(spec);
    const auto fp = run_fixed_point(inst);
    ASSERT_EQ(fp.trace.status, FixedPointStatus::converged) << "seed " << seed;
    EXPECT_TRUE(check_equilibrium(inst, fp.p, fp.x, {1e-5, 1e-5, 1e-5}).pass) << "seed " << seed;
    const auto cc = kkt_crosscheck(inst, fp.lambda, fp.x, fp.p, fp.duals.r);
    EXPECT_TRUE(cc.pass) << "seed " << seed << " residual " << cc.max();
  }
}

TEST(FixedPoint, TraceIsDeterministic) {
  const auto inst = builtin_instance(Builtin::prop2);
  FixedPointOptions opts;
  opts.max_iter = 8;
  const auto a = run_fixed_point(inst, opts);
  const auto b = run_fixed_point(inst, opts);
  EXPECT_EQ(a.trace.iterates, b.trace.iterates);
  EXPECT_EQ(a.trace.residuals, b.trace.residuals);
  EXPECT_EQ(trace_csv(a.trace), trace_csv(b.trace));
}

TEST(FixedPoint, IterationCap) {
  const auto inst = builtin_instance(Builtin::prop2);
  FixedPointOptions opts;
  opts.max_iter = 3;
  const auto fp = run_fixed_point(inst, opts);
  EXPECT_EQ(fp.trace.status, FixedPointStatus::max_iter);
  EXPECT_EQ(fp.trace.residuals.size(), 3u);
  EXPECT_EQ(fp.trace.iterates.front(), (std::vector<double>{0, 0, 0}));
}

TEST(FixedPoint, SolverFailureStopsTheLoop) {
  const MarketInstance inst(Matrix::from_rows({{1, 1}, {1, 1}}), {1, 1}, {1.5, 1}, {{0, 1}});
  const auto fp = run_fixed_point(inst);
  EXPECT_EQ(fp.trace.status, FixedPointStatus::solver_failure);
  EXPECT_EQ(fp.trace.failed_iteration, 1u);
  EXPECT_FALSE(fp.trace.message.empty());
}

TEST(FixedPoint, TraceCsvHeader) {
  const MarketInstance inst(Matrix::from_rows({{1, 2}, {3, 1}}), {1, 2}, {1, 1}, {});
  const std::string csv = trace_csv(run_fixed_point(inst).trace);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iter,residual,lambda_1,lambda_2");
}

}  // namespace
}  // namespace cfm
