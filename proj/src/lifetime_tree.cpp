#include <algorithm>
#include <queue>
#include <set>
#include <string>
#include <tuple>

#include "wsnagg/error.hpp"
#include "wsnagg/lifetime_tree.hpp"

namespace wsnagg {

std::vector<int> AggregationTree::members() const {
  std::vector<int> out;
  out.reserve(height.size());
  for (const auto& [id, h] : height) out.push_back(id);
  return out;
}

std::vector<int> AggregationTree::children(int id) const {
  std::vector<int> out;
  for (const auto& [child, p] : parent) {
    if (p == id) out.push_back(child);
  }
  return out;
}

bool AggregationTree::is_leaf(int id) const {
  return std::none_of(parent.begin(), parent.end(), [id](const auto& e) { return e.second == id; });
}

int AggregationTree::max_height() const {
  int h = 0;
  for (const auto& [id, hh] : height) h = std::max(h, hh);
  return h;
}

double edge_key(double parent_energy, double distance) {
  if (!(distance > 0.0)) {
    throw Error(ErrorCode::CoincidentNodes, "edge key needs a positive distance, got " +
                                                std::to_string(distance));
  }
  return parent_energy / distance;
}

double edge_key(const TreeInputs& in, int parent, int child) {
  const double d = euclidean_distance(in.positions[static_cast<std::size_t>(parent)],
                                      in.positions[static_cast<std::size_t>(child)]);
  const double energy =
      in.mode == KeyMode::EnergyOverDistance ? in.energies[static_cast<std::size_t>(parent)] : 1.0;
  return edge_key(energy, d);
}

int select_sub_sink(std::span<const int> cluster_nodes, std::span<const Vec2> positions,
                    std::span<const double> energies, Vec2 sink_position) {
  int best = -1;
  double best_d = 0.0;
  for (int id : cluster_nodes) {
    if (!(energies[static_cast<std::size_t>(id)] > 0.0)) continue;
    const double d = euclidean_distance(positions[static_cast<std::size_t>(id)], sink_position);
    if (best < 0 || d < best_d || (d == best_d && id < best)) {
      best = id;
      best_d = d;
    }
  }
  if (best < 0) throw Error(ErrorCode::ClusterDead, "cluster has no node with energy left");
  return best;
}

namespace {

// Frontier candidate ordered so that the preferred edge compares greatest.
struct Candidate {
  double key;
  int child;
  int parent;

  bool operator<(const Candidate& o) const {
    if (key != o.key) return key < o.key;
    if (child != o.child) return child > o.child;
    return parent > o.parent;
  }
};

AggregationTree grow(int cluster_id, std::span<const int> cluster_nodes, const TreeInputs& in,
                     int sub_sink, std::vector<int>* orphans) {
  const std::set<int> members(cluster_nodes.begin(), cluster_nodes.end());
  if (!members.contains(sub_sink)) {
    throw Error(ErrorCode::InvalidScenario,
                "sub-sink " + std::to_string(sub_sink) + " is not a cluster member");
  }

  AggregationTree tree;
  tree.cluster_id = cluster_id;
  tree.root = sub_sink;
  for (int id : members) tree.energy_snapshot[id] = in.energies[static_cast<std::size_t>(id)];

  std::priority_queue<Candidate> frontier;
  std::set<int> grown;
  auto attach = [&](int id) {
    grown.insert(id);
    tree.insertion_order.push_back(id);
    for (int v : in.graph.comm[static_cast<std::size_t>(id)]) {
      if (members.contains(v) && !grown.contains(v)) frontier.push({edge_key(in, id, v), v, id});
    }
  };

  tree.height[sub_sink] = 0;
  attach(sub_sink);
  while (!frontier.empty()) {
    const Candidate best = frontier.top();
    frontier.pop();
    if (grown.contains(best.child)) continue;
    tree.parent[best.child] = best.parent;
    tree.edge_key[best.child] = best.key;
    tree.height[best.child] = tree.height.at(best.parent) + 1;
    attach(best.child);
  }

  if (grown.size() != members.size()) {
    std::vector<int> missing;
    for (int id : members) {
      if (!grown.contains(id)) missing.push_back(id);
    }
    if (orphans != nullptr) {
      *orphans = std::move(missing);
      for (int id : *orphans) tree.energy_snapshot.erase(id);
    } else {
      std::string list;
      for (int id : missing) list += (list.empty() ? "" : ", ") + std::to_string(id);
      throw Error(ErrorCode::ClusterPartitioned, "cluster " + std::to_string(cluster_id) +
                                                     ": nodes unreachable from sub-sink " +
                                                     std::to_string(sub_sink) + ": " + list);
    }
  } else if (orphans != nullptr) {
    orphans->clear();
  }
  return tree;
}

}  // namespace

AggregationTree build_tree(int cluster_id, std::span<const int> cluster_nodes, const TreeInputs& in,
                           int sub_sink) {
  return grow(cluster_id, cluster_nodes, in, sub_sink, nullptr);
}

AggregationTree build_reachable_tree(int cluster_id, std::span<const int> cluster_nodes,
                                     const TreeInputs& in, int sub_sink, std::vector<int>& orphans) {
  return grow(cluster_id, cluster_nodes, in, sub_sink, &orphans);
}

bool replay_check(const AggregationTree& tree, std::span<const int> cluster_nodes,
                  const TreeInputs& in) {
  std::set<int> members;
  for (int id : cluster_nodes) {
    if (tree.contains(id)) members.insert(id);
  }
  if (members.size() != tree.size() || !tree.contains(tree.root)) return false;
  if (tree.parent.size() + 1 != tree.size() || tree.parent.contains(tree.root)) return false;

  std::set<int> grown{tree.root};
  while (grown.size() < members.size()) {
    // Best frontier edge under the current prefix.
    bool found = false;
    Candidate best{};
    for (int u : grown) {
      for (int v : in.graph.comm[static_cast<std::size_t>(u)]) {
        if (!members.contains(v) || grown.contains(v)) continue;
        const Candidate c{edge_key(in, u, v), v, u};
        if (!found || best < c) {
          best = c;
          found = true;
        }
      }
    }
    if (!found) return false;
    const auto it = tree.parent.find(best.child);
    if (it == tree.parent.end() || it->second != best.parent) return false;
    grown.insert(best.child);
  }
  return true;
}

}  // namespace wsnagg
