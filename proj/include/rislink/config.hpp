#pragma once
#include <iosfwd>
#include <string>

#include "rislink/scenario.hpp"

namespace rislink {

/// Shipped defaults (the desk-scale reference scenario used throughout the
/// tests and the CLI).
Scenario default_scenario();

/// Parse an INI-style scenario file ([section] blocks, key = value lines,
/// '#' comments). Unknown sections or keys are rejected with the offending
/// name; values are validated on load.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

/// Emit the effective configuration with every default materialized.
/// parse(emit(sc)) reproduces sc exactly.
std::string emit_scenario(const Scenario& sc);

/// FNV-1a hash of the effective configuration text (run-manifest id).
std::uint64_t scenario_hash(const Scenario& sc);

} // namespace rislink
