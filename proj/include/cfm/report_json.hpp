#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfm/demand.hpp"
#include "cfm/eg_solver.hpp"
#include "cfm/fixed_point.hpp"
#include "cfm/market.hpp"
#include "cfm/verifier.hpp"

namespace cfm {

/// Decimal with 12 significant digits ("%.12g"); inf/nan spelled out.
std::string format_number(double v);

/// v rounded to 12 significant digits, so a JSON dump prints at most 12.
double round12(double v);

nlohmann::json vector_json(std::span<const double> v);
nlohmann::json matrix_json(const Matrix& m);

nlohmann::json to_json(const ValidationReport& rep);
nlohmann::json to_json(const DemandResult& d);
nlohmann::json to_json(const KktReport& k);
/// Results document: {"status", "lambda", "prices", "allocation",
/// "residuals", "duals", "iterations"}.
nlohmann::json to_json(const SolveResult& r, std::span<const double> lambda);
nlohmann::json to_json(const FixedPointResult& r);
nlohmann::json to_json(const EquilibriumReport& rep);
nlohmann::json to_json(const BudgetGapReport& rep);
nlohmann::json to_json(const CrosscheckReport& rep);
nlohmann::json to_json(const GridScanReport& rep);

}  // namespace cfm
