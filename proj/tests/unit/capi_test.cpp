#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include "cfm/cfm.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  cfm_string_free(s);
  return out;
}

struct Instance {
  cfm_instance* p = nullptr;
  ~Instance() { cfm_instance_free(p); }
};

TEST(CApi, BuiltinShapesAndRoundTrip) {
  Instance a, b;
  ASSERT_EQ(cfm_instance_builtin("prop2", 1, &a.p), CFM_OK);
  EXPECT_EQ(cfm_instance_agents(a.p), 3u);
  EXPECT_EQ(cfm_instance_goods(a.p), 3u);
  EXPECT_EQ(cfm_instance_types(a.p), 1u);
  char* json = nullptr;
  ASSERT_EQ(cfm_instance_to_json(a.p, &json), CFM_OK);
  const std::string text = take(json);
  ASSERT_EQ(cfm_instance_from_json(text.c_str(), &b.p), CFM_OK);
  char* again = nullptr;
  ASSERT_EQ(cfm_instance_to_json(b.p, &again), CFM_OK);
  EXPECT_EQ(take(again), text);
}

TEST(CApi, ErrorsCarryCodesAndMessages) {
  cfm_instance* p = nullptr;
  EXPECT_EQ(cfm_instance_builtin("nope", 1, &p), CFM_UNKNOWN_NAME);
  EXPECT_EQ(p, nullptr);
  EXPECT_NE(std::string(cfm_last_error()).find("nope"), std::string::npos);
  EXPECT_EQ(cfm_instance_from_json("{", &p), CFM_PARSE_ERROR);
  EXPECT_EQ(cfm_instance_load("/nonexistent.json", &p), CFM_IO_ERROR);
  EXPECT_EQ(cfm_instance_builtin(nullptr, 1, &p), CFM_INVALID_ARGUMENT);
  EXPECT_STREQ(cfm_status_name(CFM_NOT_AT_FIXED_POINT), "not-at-fixed-point");
  EXPECT_STRNE(cfm_version(), "");
}

TEST(CApi, SolveAndFixedPoint) {
  Instance inst;
  ASSERT_EQ(cfm_instance_builtin("prop2", 1, &inst.p), CFM_OK);
  cfm_options opts;
  cfm_options_init(&opts);
  EXPECT_DOUBLE_EQ(opts.solver_tol, 1e-8);
  EXPECT_EQ(opts.fp_max_iter, 500u);

  int solved = 0;
  char* json = nullptr;
  ASSERT_EQ(cfm_solve(inst.p, nullptr, 0, &opts, &solved, &json), CFM_OK);
  EXPECT_EQ(solved, 1);
  EXPECT_NE(take(json).find("\"prices\""), std::string::npos);

  const double bad[2] = {0, 0};
  EXPECT_EQ(cfm_solve(inst.p, bad, 2, &opts, &solved, nullptr), CFM_DIMENSION_MISMATCH);

  int converged = 0;
  char* trace = nullptr;
  ASSERT_EQ(cfm_fixed_point(inst.p, nullptr, &converged, nullptr, &trace), CFM_OK);
  EXPECT_EQ(converged, 1);
  EXPECT_EQ(take(trace).rfind("iter,residual,lambda_1", 0), 0u);
}

TEST(CApi, DemandAndCheck) {
  Instance inst;
  ASSERT_EQ(cfm_instance_builtin("prop2", 1, &inst.p), CFM_OK);
  const double p[3] = {11, 10, 9};
  char* json = nullptr;
  ASSERT_EQ(cfm_demand(inst.p, 0, p, 3, &json), CFM_OK);
  EXPECT_NE(take(json).find("\"x\""), std::string::npos);

  const double x[9] = {1, 0, 1, 0, 1, 0, 0, 1, 0};
  int pass = 0;
  ASSERT_EQ(cfm_check_equilibrium(inst.p, p, 3, x, 9, nullptr, &pass, nullptr), CFM_OK);
  EXPECT_EQ(pass, 1);
  ASSERT_EQ(cfm_check_equilibrium_json(inst.p, "[10, 10, 10]",
                                       "{\"allocation\": [[1, 0, 1], [0, 1, 0], [0, 1, 0]]}",
                                       nullptr, &pass, nullptr),
            CFM_OK);
  EXPECT_EQ(pass, 1);
  const double half[9] = {0.5, 0, 1, 0, 1, 0, 0, 1, 0};
  ASSERT_EQ(cfm_check_equilibrium(inst.p, p, 3, half, 9, nullptr, &pass, nullptr), CFM_OK);
  EXPECT_EQ(pass, 0);
  EXPECT_EQ(cfm_check_equilibrium(inst.p, p, 3, x, 8, nullptr, &pass, nullptr),
            CFM_DIMENSION_MISMATCH);
}

TEST(CApi, ValidateRandomAndGrid) {
  Instance inst;
  ASSERT_EQ(cfm_instance_random(3, 4, 4, "2x2", 1, 10, 0.1, 1, 0, &inst.p), CFM_OK);
  int ok = 0;
  char* report = nullptr;
  ASSERT_EQ(cfm_validate(inst.p, &ok, &report), CFM_OK);
  EXPECT_EQ(ok, 1);
  EXPECT_NE(take(report).find("degenerate"), std::string::npos);

  Instance p1;
  ASSERT_EQ(cfm_instance_builtin("prop1", 1, &p1.p), CFM_OK);
  char* grid = nullptr;
  ASSERT_EQ(cfm_grid_scan(p1.p, 3.0, 0.5, &grid), CFM_OK);
  EXPECT_NE(take(grid).find("min_residual"), std::string::npos);
  EXPECT_EQ(cfm_grid_scan(inst.p, 3.0, 0.5, nullptr), CFM_INVALID_ARGUMENT);
}

TEST(CApi, Reproduce) {
  int pass = 0;
  char* table = nullptr;
  ASSERT_EQ(cfm_reproduce("iop_ex2", nullptr, &pass, &table, nullptr), CFM_OK);
  EXPECT_EQ(pass, 1);
  EXPECT_NE(take(table).find("PASS"), std::string::npos);
  EXPECT_EQ(cfm_reproduce("missing", nullptr, &pass, nullptr, nullptr), CFM_UNKNOWN_NAME);
}

}  // namespace
