#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsnagg/geometry.hpp"

namespace wsnagg {

enum class NodeRole { Source, SubSink, Sink };
enum class RadioState { Sleep, Lpl, Awake };

struct NodeState {
  int id = 0;
  Vec2 position;
  double residual_energy = 0.0;  // joules
  NodeRole role = NodeRole::Source;
  RadioState radio_state = RadioState::Lpl;
  std::optional<int> cluster_id;

  bool alive() const { return residual_energy > 0.0; }

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

/// Half-open frequency interval [low, high) in hertz.
struct Band {
  double low = 0.0;
  double high = 0.0;

  double width() const { return high - low; }
  friend bool operator==(const Band&, const Band&) = default;
};

struct Scenario {
  double width = 100.0;   // meters
  double height = 100.0;  // meters
  std::vector<NodeState> nodes;
  int sink_id = 0;
  int k = 1;
  Band band{2.400e9, 2.4835e9};
  int channels_per_range = 4;
  double theta_em = 1e-6;
  int max_em_iters = 200;
  double e_elec = 50e-9;    // J/bit
  double e_amp = 100e-12;   // J/bit/m^2
  double e_lpl = 1e-6;      // J/slot
  double packet_bits = 4000.0;
  double comm_range = 40.0;          // meters
  double interference_range = 80.0;  // meters
  double refresh_fraction = 0.2;     // rho
  int max_rounds = 100;
  std::uint64_t seed = 1;
  bool aggregation = true;

  std::size_t size() const { return nodes.size(); }
  const NodeState& sink() const { return nodes.at(static_cast<std::size_t>(sink_id)); }
  std::vector<Vec2> positions() const;
  std::vector<int> source_ids() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws Error (InvalidScenario, TooFewNodes or CoincidentNodes) naming the
/// first violated invariant.
void validate_scenario(const Scenario& scenario);

}  // namespace wsnagg
