#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eealloc/model.hpp"

namespace eealloc::cli {

/// Malformed or invalid input; maps to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view content);

/**
 * Parses a scenario document:
 *
 *   {"users": [{"gain": g, "min_rate": r, "bandwidth": w?}, ...],
 *    "bandwidth_budget": W_M, "power_budget": P_M,
 *    "amp_efficiency": zeta, "circuit_power": P_C}
 *
 * Unknown keys, missing keys and non-numeric values throw InputError naming
 * the offending field. Does not run validate().
 */
Scenario parse_scenario(std::string_view text);

/// Inverse of parse_scenario, keys in schema order, shortest round-trip
/// number formatting.
std::string scenario_to_json(const Scenario& s);

}  // namespace eealloc::cli
