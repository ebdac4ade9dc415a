#pragma once

#include <map>
#include <span>
#include <vector>

#include "wsnagg/geometry.hpp"
#include "wsnagg/neighbor_graph.hpp"

namespace wsnagg {

/// Edge preference used while growing a cluster tree.
enum class KeyMode {
  EnergyOverDistance,  // parent residual energy / distance
  InverseDistance,     // 1 / distance, energy ignored (baseline)
};

struct AggregationTree {
  int cluster_id = 0;
  int root = -1;
  std::map<int, int> parent;        // child -> parent, every non-root member
  std::map<int, double> edge_key;   // child -> key of its parent edge
  std::map<int, int> height;        // member -> hops from root
  std::vector<int> insertion_order; // root first
  std::map<int, double> energy_snapshot;  // residual energy of each member at build time

  std::size_t size() const { return height.size(); }
  bool contains(int id) const { return height.contains(id); }
  std::vector<int> members() const;
  std::vector<int> children(int id) const;
  bool is_leaf(int id) const;
  int max_height() const;

  friend bool operator==(const AggregationTree&, const AggregationTree&) = default;
};

/// Read-only view of the quantities tree construction needs, indexed by id.
struct TreeInputs {
  std::span<const Vec2> positions;
  std::span<const double> energies;
  const NeighborGraph& graph;
  KeyMode mode = KeyMode::EnergyOverDistance;
};

/// parent_energy / distance; throws CoincidentNodes when distance <= 0.
double edge_key(double parent_energy, double distance);

/// Key of the edge parent -> child under the given mode.
double edge_key(const TreeInputs& in, int parent, int child);

/// Member nearest the sink among nodes with energy > 0, ties to lowest id.
/// Throws ClusterDead if none qualifies.
int select_sub_sink(std::span<const int> cluster_nodes, std::span<const Vec2> positions,
                    std::span<const double> energies, Vec2 sink_position);

/// Greedy growth from the sub-sink over comm edges, always attaching the
/// frontier edge with the largest key (ties: lower child id, then lower
/// parent id). Throws ClusterPartitioned listing unreachable members.
AggregationTree build_tree(int cluster_id, std::span<const int> cluster_nodes, const TreeInputs& in,
                           int sub_sink);

/// Like build_tree, but members unreachable from the sub-sink are left out and
/// returned through `orphans` instead of raising.
AggregationTree build_reachable_tree(int cluster_id, std::span<const int> cluster_nodes,
                                     const TreeInputs& in, int sub_sink, std::vector<int>& orphans);

/// Replays the greedy and checks that every step attached the best frontier
/// edge under the tie rule. True iff the tree is the greedy tree.
bool replay_check(const AggregationTree& tree, std::span<const int> cluster_nodes,
                  const TreeInputs& in);

}  // namespace wsnagg
