#pragma once

#include <vector>

#include "wsnagg/scenario.hpp"

namespace wsnagg {

/// Disk model: a communication disk and a larger interference disk around
/// every node. Adjacency lists are sorted ascending.
struct NeighborGraph {
  std::vector<std::vector<int>> comm;
  std::vector<std::vector<int>> interference;

  std::size_t size() const { return comm.size(); }
  bool comm_linked(int a, int b) const;
  bool interference_linked(int a, int b) const;
};

NeighborGraph build_neighbor_graph(const Scenario& scenario);
NeighborGraph build_neighbor_graph(const std::vector<Vec2>& positions, double comm_range,
                                   double interference_range);

/// Nodes exactly two interference hops from i: not i, not a one-hop neighbor.
std::vector<int> two_hop_neighbors(const NeighborGraph& graph, int i);

}  // namespace wsnagg
