#pragma once

#include <string>
#include <string_view>

#include "cfm/market.hpp"

namespace cfm {

/// Parses the instance document
///   {"n", "m", "utilities", "budgets", "capacities", "types", "participation"?}
/// with 0-based good indices in "types". Throws Errc::parse_error with a
/// 1-based location on malformed input.
MarketInstance instance_from_json(std::string_view text);

/// Reads and parses a file; Errc::io_error when it cannot be read.
MarketInstance load_instance(const std::string& path);

/// Serializes with shortest round-trip doubles, so parsing the output
/// reproduces the instance exactly.
std::string instance_to_json(const MarketInstance& inst);

PriceVector prices_from_json(std::string_view text);
Allocation allocation_from_json(std::string_view text);

std::string read_text_file(const std::string& path);

}  // namespace cfm
