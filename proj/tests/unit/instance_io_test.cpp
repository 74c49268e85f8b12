#include <gtest/gtest.h>

#include "cfm/error.hpp"
#include "cfm/instance_io.hpp"

namespace cfm {
namespace {

TEST(InstanceIo, RoundTripIsExact) {
  for (const char* name : {"prop1", "prop2", "iop_ex2", "experiment"}) {
    const MarketInstance inst = builtin_instance(name, 7);
    EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst) << name;
  }
}

TEST(InstanceIo, ParticipationIsOptional) {
  const auto inst = instance_from_json(R"({"n": 2, "m": 2, "utilities": [[1, 2], [3, 4]],
      "budgets": [1, 1], "capacities": [1, 1], "types": [[0, 1]],
      "participation": [[true], [false]]})");
  EXPECT_FALSE(inst.participates(1, 0));
  EXPECT_EQ(instance_from_json(instance_to_json(inst)), inst);
}

TEST(InstanceIo, ErrorsAreParseErrors) {
  for (const char* bad : {"{", "[]", R"({"n": 1})",
                          R"({"n": 1, "m": 1, "utilities": [[1, 2]], "budgets": [1], "capacities": [1]})",
                          R"({"n": 1, "m": 1, "utilities": [["a"]], "budgets": [1], "capacities": [1]})",
                          R"({"n": 1, "m": 1, "utilities": [[1]], "budgets": [1], "capacities": [1], "types": [[-1]]})"}) {
    try {
      instance_from_json(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::parse_error) << bad;
    }
  }
}

TEST(InstanceIo, PricesAndAllocations) {
  EXPECT_EQ(prices_from_json("[11, 10, 9]"), (PriceVector{11, 10, 9}));
  EXPECT_EQ(prices_from_json(R"({"prices": [1, 2]})"), (PriceVector{1, 2}));
  EXPECT_EQ(allocation_from_json("[[1, 0], [0, 1]]"), Matrix::from_rows({{1, 0}, {0, 1}}));
  EXPECT_EQ(allocation_from_json(R"({"status": "x", "allocation": [[2]]})"), Matrix::from_rows({{2}}));
  EXPECT_THROW(allocation_from_json("[[1, 0], [1]]"), Error);
}

TEST(InstanceIo, MissingFile) {
  try {
    load_instance("/nonexistent/instance.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io_error);
  }
}

}  // namespace
}  // namespace cfm
