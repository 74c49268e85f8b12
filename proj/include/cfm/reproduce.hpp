#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cfm {

struct ReproduceOptions {
  std::uint64_t seed = 1;
  double eps = 1e-6;
  std::size_t max_iter = 500;
  double solver_tol = 1e-8;
};

struct ReproduceCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ReproduceReport {
  std::string name;
  std::vector<ReproduceCheck> checks;
  nlohmann::json data;
  double seconds = 0.0;

  bool pass() const;
};

/// Names: prop1, prop2, iop_ex1, iop_ex2, experiment, sop1_gap.
/// Throws Errc::unknown_name.
ReproduceReport reproduce(std::string_view name, const ReproduceOptions& opts = {});

std::vector<std::string_view> reproduce_names();

/// Plain-text pass/fail table.
std::string format_table(const ReproduceReport& rep);

nlohmann::json to_json(const ReproduceReport& rep);

}  // namespace cfm
