#include <gtest/gtest.h>

#include "cfm/error.hpp"
#include "cfm/reproduce.hpp"

namespace cfm {
namespace {

TEST(Reproduce, SmallExamplesPass) {
  for (const char* name : {"iop_ex1", "iop_ex2", "prop1", "prop2"}) {
    const auto rep = reproduce(name);
    EXPECT_TRUE(rep.pass()) << format_table(rep);
    EXPECT_FALSE(rep.checks.empty());
    EXPECT_EQ(to_json(rep)["name"], name);
  }
}

TEST(Reproduce, BudgetGapWitness) {
  const auto rep = reproduce("sop1_gap");
  EXPECT_TRUE(rep.pass()) << format_table(rep);
}

TEST(Reproduce, UnknownName) {
  try {
    reproduce("prop3");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unknown_name);
  }
  EXPECT_EQ(reproduce_names().size(), 6u);
}

}  // namespace
}  // namespace cfm
