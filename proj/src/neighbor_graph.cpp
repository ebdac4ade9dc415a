#include <algorithm>

#include "wsnagg/neighbor_graph.hpp"
#include "wsnagg/simd/kernels.hpp"

namespace wsnagg {

bool NeighborGraph::comm_linked(int a, int b) const {
  const auto& adj = comm[static_cast<std::size_t>(a)];
  return std::binary_search(adj.begin(), adj.end(), b);
}

bool NeighborGraph::interference_linked(int a, int b) const {
  const auto& adj = interference[static_cast<std::size_t>(a)];
  return std::binary_search(adj.begin(), adj.end(), b);
}

NeighborGraph build_neighbor_graph(const Scenario& scenario) {
  return build_neighbor_graph(scenario.positions(), scenario.comm_range,
                              scenario.interference_range);
}

NeighborGraph build_neighbor_graph(const std::vector<Vec2>& positions, double comm_range,
                                   double interference_range) {
  const std::size_t n = positions.size();
  const PointSet points(positions);
  const auto& kernels = simd::active_kernels();

  NeighborGraph graph;
  graph.comm.resize(n);
  graph.interference.resize(n);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    kernels.distances_from(positions[i], points.xs, points.ys, dist);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (dist[j] <= interference_range) graph.interference[i].push_back(static_cast<int>(j));
      if (dist[j] <= comm_range) graph.comm[i].push_back(static_cast<int>(j));
    }
  }
  return graph;
}

std::vector<int> two_hop_neighbors(const NeighborGraph& graph, int i) {
  const auto& one_hop = graph.interference[static_cast<std::size_t>(i)];
  std::vector<int> out;
  for (int j : one_hop) {
    for (int k : graph.interference[static_cast<std::size_t>(j)]) {
      if (k == i || std::binary_search(one_hop.begin(), one_hop.end(), k)) continue;
      out.push_back(k);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace wsnagg
