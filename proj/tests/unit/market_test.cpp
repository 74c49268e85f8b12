#include <gtest/gtest.h>

#include "cfm/error.hpp"
#include "cfm/market.hpp"

namespace cfm {
namespace {

MarketInstance simple(std::vector<TypeSet> types) {
  return MarketInstance(Matrix::from_rows({{1, 2, 3}, {3, 2, 1}}), {1, 2}, {1, 1, 1},
                        std::move(types));
}

TEST(Matrix, FromRowsRejectsRaggedInput) {
  EXPECT_THROW(Matrix::from_rows({{1, 2}, {3}}), Error);
  const Matrix m = Matrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(m(1, 0), 3);
  EXPECT_EQ(m.to_rows(), (std::vector<std::vector<double>>{{1, 2}, {3, 4}}));
}

TEST(MarketInstance, ShapesAreChecked) {
  EXPECT_THROW(MarketInstance(Matrix(2, 2), {1}, {1, 1}, {}), Error);
  EXPECT_THROW(MarketInstance(Matrix(2, 2), {1, 1}, {1}, {}), Error);
  EXPECT_THROW(MarketInstance(Matrix(2, 2), {1, 1}, {1, 1}, {{0}}, {{true}}), Error);
}

TEST(MarketInstance, TypeLookupAndParticipants) {
  MarketInstance inst(Matrix::from_rows({{1, 1, 1}, {1, 1, 1}}), {1, 1}, {0.5, 0.5, 1},
                      {{0, 1}}, {{true}, {false}});
  EXPECT_EQ(inst.type_of(0), 0u);
  EXPECT_FALSE(inst.type_of(2).has_value());
  EXPECT_EQ(inst.participants(0), 1u);
  EXPECT_DOUBLE_EQ(inst.type_capacity(0), 1.0);
}

TEST(Validate, Prop2IsCleanWithUntypedGood) {
  const auto rep = validate_instance(builtin_instance(Builtin::prop2));
  EXPECT_TRUE(rep.errors.empty());
  EXPECT_FALSE(rep.has_warning("no-untyped-good"));
}

TEST(Validate, Prop1WarnsNoUntypedGood) {
  const auto rep = validate_instance(builtin_instance(Builtin::prop1));
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.has_warning("no-untyped-good"));
}

TEST(Validate, OverlappingTypes) {
  const auto rep = validate_instance(simple({{0, 1}, {1, 2}}));
  ASSERT_EQ(rep.errors.size(), 1u);
  EXPECT_EQ(rep.errors[0].code, "types overlap");
}

TEST(Validate, HardInvariants) {
  EXPECT_TRUE(validate_instance(MarketInstance(Matrix::from_rows({{0, 0}}), {1}, {1, 1}, {}))
                  .has_error("agent values nothing"));
  EXPECT_TRUE(validate_instance(MarketInstance(Matrix::from_rows({{1, -1}}), {1}, {1, 1}, {}))
                  .has_error("negative utility"));
  EXPECT_TRUE(validate_instance(MarketInstance(Matrix::from_rows({{1, 1}}), {0}, {1, 1}, {}))
                  .has_error("nonpositive budget"));
  EXPECT_TRUE(validate_instance(MarketInstance(Matrix::from_rows({{1, 1}}), {1}, {1, 0}, {}))
                  .has_error("nonpositive capacity"));
  EXPECT_TRUE(validate_instance(MarketInstance(Matrix::from_rows({{1, 1}}), {1}, {1, 1}, {{0, 5}}))
                  .has_error("type index out of range"));
}

TEST(Validate, CapacityBeyondCapsIsInfeasibleOnlyWithoutOutsiders) {
  const auto tight = MarketInstance(Matrix::from_rows({{1, 1}, {1, 1}}), {1, 1}, {1.5, 1}, {{0, 1}});
  EXPECT_TRUE(validate_instance(tight).has_error("type capacity infeasible"));
  EXPECT_TRUE(is_type_infeasible(tight, 0));

  const auto outsider = MarketInstance(Matrix::from_rows({{1, 1}, {1, 1}}), {1, 1}, {1.5, 1},
                                       {{0, 1}}, {{true}, {false}});
  const auto rep = validate_instance(outsider);
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.has_warning("type-capacity-exceeds-caps"));
}

TEST(Validate, DegenerateTightTypesAreReported) {
  const auto rep = validate_instance(builtin_instance(Builtin::experiment));
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.degenerate_tight_types, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(is_degenerate_tight(builtin_instance(Builtin::prop2), 0));
}

TEST(Validate, MessagesUseOneBasedIndices) {
  const auto rep =
      validate_instance(MarketInstance(Matrix::from_rows({{1, 1}}), {1}, {1, 0}, {}));
  ASSERT_FALSE(rep.errors.empty());
  EXPECT_NE(rep.errors[0].message.find("good 2"), std::string::npos);
}

TEST(Builtins, ReferenceTables) {
  const auto p1 = builtin_instance(Builtin::prop1);
  EXPECT_EQ(p1.utilities(), Matrix::from_rows({{200, 0.1}, {100, 1.1}}));
  EXPECT_EQ(p1.budgets(), (std::vector<double>{15, 5}));
  EXPECT_EQ(p1.capacities(), (std::vector<double>{1.5, 0.5}));
  EXPECT_EQ(p1.types(), (std::vector<TypeSet>{{0, 1}}));

  const auto p2 = builtin_instance(Builtin::prop2);
  EXPECT_EQ(p2.utilities(), Matrix::from_rows({{100, 1, 2}, {1, 100, 1}, {1, 100, 1}}));
  EXPECT_EQ(p2.budgets(), (std::vector<double>{20, 10, 10}));
  EXPECT_EQ(p2.capacities(), (std::vector<double>{1, 2, 1}));
  EXPECT_EQ(p2.types(), (std::vector<TypeSet>{{0, 1}}));

  const auto e1 = builtin_instance(Builtin::iop_ex1);
  EXPECT_EQ(e1.utilities(), Matrix::from_rows({{1, 2, 3, 4, 5, 6}}));
  EXPECT_EQ(e1.budgets(), (std::vector<double>{2.4}));
  EXPECT_EQ(e1.types(), (std::vector<TypeSet>{{0, 2, 4}, {1, 3, 5}}));

  const auto e2 = builtin_instance(Builtin::iop_ex2);
  EXPECT_EQ(e2.budgets(), (std::vector<double>{4.5}));
  EXPECT_EQ(e2.types(), (std::vector<TypeSet>{{0, 2}, {1, 3, 5}}));
  EXPECT_FALSE(e2.type_of(4).has_value());

  const auto ex = builtin_instance(Builtin::experiment);
  EXPECT_EQ(ex.n_agents(), 200u);
  EXPECT_EQ(ex.n_goods(), 6u);
  EXPECT_EQ(ex.capacities(), std::vector<double>(6, 100.0));
  EXPECT_EQ(ex.types(), (std::vector<TypeSet>{{0, 1}, {2, 3}, {4, 5}}));
}

TEST(Builtins, AllValidate) {
  for (auto b : {Builtin::prop1, Builtin::prop2, Builtin::iop_ex1, Builtin::iop_ex2,
                 Builtin::experiment}) {
    EXPECT_TRUE(validate_instance(builtin_instance(b)).errors.empty()) << to_string(b);
    EXPECT_EQ(parse_builtin(to_string(b)), b);
  }
  try {
    builtin_instance("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unknown_name);
  }
}

TEST(RandomInstance, DeterministicAndInRange) {
  RandomSpec spec;
  spec.seed = 1;
  spec.n_agents = 200;
  spec.n_goods = 6;
  spec.types = consecutive_types(3, 2);
  const auto a = random_instance(spec);
  EXPECT_EQ(a, random_instance(spec));
  EXPECT_EQ(a, builtin_instance(Builtin::experiment, 1));
  for (std::size_t i = 0; i < a.n_agents(); ++i) {
    EXPECT_GE(a.budget(i), 1.0);
    EXPECT_LE(a.budget(i), 10.0);
    for (std::size_t j = 0; j < a.n_goods(); ++j) {
      EXPECT_GE(a.utility(i, j), 0.1);
      EXPECT_LE(a.utility(i, j), 1.0);
    }
  }
  spec.seed = 2;
  EXPECT_FALSE(a == random_instance(spec));
}

TEST(RandomInstance, ClassicalFisherShape) {
  RandomSpec spec;
  spec.seed = 2;
  spec.n_agents = 2;
  spec.n_goods = 2;
  const auto inst = random_instance(spec);
  EXPECT_EQ(inst.n_types(), 0u);
  EXPECT_TRUE(validate_instance(inst).ok());
}

TEST(RandomInstance, RejectsBadRanges) {
  RandomSpec spec;
  spec.n_agents = 2;
  spec.n_goods = 2;
  spec.budgets = {5, 1};
  EXPECT_THROW(random_instance(spec), Error);
  spec.budgets = {1, 5};
  spec.utilities = {-1, 1};
  EXPECT_THROW(random_instance(spec), Error);
}

TEST(TypeSpec, Parses) {
  EXPECT_EQ(parse_type_spec("2x3"), (std::vector<TypeSet>{{0, 1, 2}, {3, 4, 5}}));
  EXPECT_TRUE(parse_type_spec("none").empty());
  EXPECT_THROW(parse_type_spec("2by3"), Error);
}

}  // namespace
}  // namespace cfm
