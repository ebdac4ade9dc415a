#pragma once

// Scenario text format
// --------------------
//   # comment (to end of line), blank lines ignored
//   key = value            one scalar per line, keys listed in kScenarioKeys
//   [nodes]                starts the node table; nothing but rows may follow
//   id x y energy          one row per node, ids 0..N-1 in order
//
// The sink is the row whose id equals sink_id (default 0); every other row is
// a source. Unset keys keep the defaults of Scenario. Booleans are true/false.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "wsnagg/scenario.hpp"

namespace wsnagg {

inline constexpr std::string_view kScenarioKeys[] = {
    "width",        "height",      "sink_id",        "k",
    "band_low",     "band_high",   "channels_per_range", "theta_em",
    "max_em_iters", "e_elec",      "e_amp",          "e_lpl",
    "packet_bits",  "comm_range",  "interference_range", "refresh_fraction",
    "max_rounds",   "seed",        "aggregation",
};

/// Parses and validates. Syntax errors name the line; invariant violations
/// come from validate_scenario.
Scenario parse_scenario(std::string_view text);

/// Inverse of parse_scenario; doubles are written in shortest round-trip form.
std::string format_scenario(const Scenario& scenario);

/// Sets one scalar field by key. Throws InvalidScenario on unknown keys or
/// malformed values. Does not validate the whole scenario.
void apply_override(Scenario& scenario, std::string_view key, std::string_view value);

struct GeneratorDefaults {
  Scenario base;              // constants copied into the result
  double initial_energy = 2.0;
};

/// Sink (id 0) at the area center, n_nodes - 1 sources uniform in the area,
/// resampling any coincident draw. Deterministic in seed.
Scenario generate_random_scenario(int n_nodes, double width, double height, int k,
                                  std::uint64_t seed, const GeneratorDefaults& defaults = {});

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
/// Writes through a temporary file and rename so readers never see a partial file.
void write_text_file_atomic(const std::string& path, std::string_view content);

}  // namespace wsnagg
