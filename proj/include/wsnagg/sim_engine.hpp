#pragma once

#include <map>
#include <string>
#include <vector>

#include "wsnagg/emd_clustering.hpp"
#include "wsnagg/fdma_allocator.hpp"
#include "wsnagg/hybrid_scheduler.hpp"
#include "wsnagg/lifetime_tree.hpp"
#include "wsnagg/neighbor_graph.hpp"
#include "wsnagg/scenario.hpp"

namespace wsnagg {

struct EnergyModel {
  double e_elec = 0.0;       // J/bit, paid on both tx and rx
  double e_amp = 0.0;        // J/bit/m^2
  double e_lpl = 0.0;        // J/slot in low-power listening
  double packet_bits = 0.0;

  static EnergyModel from(const Scenario& s) { return {s.e_elec, s.e_amp, s.e_lpl, s.packet_bits}; }
};

/// Joules by cost component. tx_elec + tx_amp is the transmit cost.
struct EnergyBreakdown {
  double tx_elec = 0.0;
  double tx_amp = 0.0;
  double rx = 0.0;
  double lpl = 0.0;

  double total() const { return tx_elec + tx_amp + rx + lpl; }
  EnergyBreakdown& operator+=(const EnergyBreakdown& o) {
    tx_elec += o.tx_elec;
    tx_amp += o.tx_amp;
    rx += o.rx;
    lpl += o.lpl;
    return *this;
  }
  friend bool operator==(const EnergyBreakdown&, const EnergyBreakdown&) = default;
};

/// bits * (e_elec + e_amp * d^2)
double tx_energy(const EnergyModel& model, double bits, double distance);
EnergyBreakdown tx_energy_parts(const EnergyModel& model, double bits, double distance);
/// bits * e_elec
double rx_energy(const EnergyModel& model, double bits);

/// Packets a node sends upward in one round: one when aggregating (own reading
/// merged with everything received), 1 + child_packets otherwise, 0 if dead.
int aggregate(int child_packets, bool alive, bool aggregation = true);

/// Mutable per-simulation state. The sink is never charged and never dies.
struct NetworkState {
  int sink_id = 0;
  std::vector<Vec2> positions;
  std::vector<double> initial;
  std::vector<double> residual;
  std::vector<double> spent;
  std::vector<bool> alive;
  std::vector<RadioState> radio;

  static NetworkState from(const Scenario& s);
  std::size_t size() const { return positions.size(); }
  std::vector<int> alive_sources() const;
  /// Residual energy with dead nodes reported as zero.
  std::vector<double> usable_energy() const;
};

/// Everything the FINAL ALGORITHM produces before data rounds begin.
struct Configuration {
  Clustering clustering;
  std::vector<AggregationTree> trees;  // ascending cluster id
  FrequencyPlan plan;
  Schedule schedule;
  std::map<int, int> uplink_slot;  // root -> slot of its transmission to the sink
  int round_slots = 0;             // t_max plus root serialization
  std::vector<int> orphans;        // alive members cut off from their sub-sink
};

enum class EpochKind { Initial, Refresh, Recluster };

struct EpochEntry {
  int after_round = 0;
  EpochKind kind = EpochKind::Initial;
  EnergyBreakdown energy;
  int nodes_reached = 0;
  int deaths = 0;

  friend bool operator==(const EpochEntry&, const EpochEntry&) = default;
};

struct RoundEntry {
  int round = 0;
  EnergyBreakdown energy;
  int packets_delivered = 0;
  int readings_delivered = 0;
  int readings_lost = 0;
  int deaths = 0;
  int max_latency_slots = 0;
  int t_max = 0;
  int round_slots = 0;
  int clusters = 0;

  friend bool operator==(const RoundEntry&, const RoundEntry&) = default;
};

struct SimMetrics {
  int rounds_completed = 0;
  int first_node_death_round = 0;
  bool any_node_died = false;
  double total_energy_spent = 0.0;
  double initial_total_energy = 0.0;
  double final_residual_energy = 0.0;
  std::vector<double> per_node_energy_spent;
  long long packets_delivered_to_sink = 0;
  long long readings_delivered = 0;
  long long readings_lost = 0;
  int tree_refresh_count = 0;
  int recluster_count = 0;
  int max_delivery_latency_slots = 0;
  std::vector<EpochEntry> epochs;
  std::vector<RoundEntry> rounds;

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

struct EpochResult {
  EnergyBreakdown energy;
  int nodes_reached = 0;
  int deaths = 0;
};

/// Reliable flood of the topology/schedule packet from the sink over comm
/// links. Each newly reached node listens (e_lpl per hop of latency), receives
/// once and rebroadcasts once at comm_range power.
EpochResult broadcast_topology(NetworkState& state, const NeighborGraph& graph,
                               const EnergyModel& model, double comm_range);

/// Trees, plan and schedule for a fixed clustering over the alive nodes. With
/// strict = true a partitioned cluster raises ClusterPartitioned; otherwise the
/// unreachable nodes become orphans.
Configuration configure_trees(const Clustering& clustering, const NetworkState& state,
                              const NeighborGraph& graph, const Scenario& scenario, KeyMode mode,
                              bool strict);

/// run_emd over the alive sources followed by configure_trees.
Configuration configure_network(const Scenario& scenario, const NetworkState& state,
                                const NeighborGraph& graph, KeyMode mode, bool strict);

/// Runs one TDMA cycle of data collection.
RoundEntry run_round(NetworkState& state, const Configuration& config, const EnergyModel& model,
                     bool aggregation);

/// True iff some tree member is dead, or a non-leaf member has fallen below
/// rho times its energy when the tree was built.
bool needs_refresh(const NetworkState& state, const std::vector<AggregationTree>& trees,
                   double rho);

SimMetrics run_simulation(const Scenario& scenario, KeyMode mode = KeyMode::EnergyOverDistance);

struct TreeEdge {
  int cluster;
  int child;
  int parent;

  friend auto operator<=>(const TreeEdge&, const TreeEdge&) = default;
};

struct BaselineRow {
  std::string variant;
  KeyMode mode;
  SimMetrics metrics;
  std::vector<TreeEdge> initial_edges;  // sorted
};

struct ComparisonReport {
  std::vector<BaselineRow> rows;  // energy/distance first, distance-only second
};

ComparisonReport compare_baselines(const Scenario& scenario);

std::vector<TreeEdge> tree_edges(const std::vector<AggregationTree>& trees);

}  // namespace wsnagg
