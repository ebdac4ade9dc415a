#include <algorithm>
#include <set>
#include <string>

#include "wsnagg/error.hpp"
#include "wsnagg/hybrid_scheduler.hpp"

namespace wsnagg {

std::string_view to_string(ConflictReason reason) {
  switch (reason) {
    case ConflictReason::SameSlotSameChannelInterfering: return "same_slot_same_channel_interfering";
    case ConflictReason::SiblingSlotShared: return "sibling_slot_shared";
    case ConflictReason::ChildNotBeforeParent: return "child_not_before_parent";
    case ConflictReason::ChannelOverflow: return "channel_overflow";
  }
  return "unknown";
}

namespace {

struct Placement {
  int cluster;
  int height;
  int parent;  // -1 for roots
};

std::map<int, Placement> index_trees(const std::vector<AggregationTree>& trees) {
  std::map<int, Placement> out;
  for (const auto& t : trees) {
    for (const auto& [id, h] : t.height) {
      const auto p = t.parent.find(id);
      const bool fresh =
          out.emplace(id, Placement{t.cluster_id, h, p == t.parent.end() ? -1 : p->second}).second;
      if (!fresh) {
        throw Error(ErrorCode::InvalidScenario,
                    "node " + std::to_string(id) + " appears in more than one tree");
      }
    }
  }
  return out;
}

bool within_two_hops(const NeighborGraph& g, int a, int b) {
  if (g.interference_linked(a, b)) return true;
  for (int j : g.interference[static_cast<std::size_t>(a)]) {
    if (g.interference_linked(j, b)) return true;
  }
  return false;
}

}  // namespace

Schedule assign_slots(const std::vector<AggregationTree>& trees, const NeighborGraph& graph,
                      const FrequencyPlan& plan, ConflictReport* overflows) {
  const auto placement = index_trees(trees);
  for (const auto& t : trees) {
    if (!plan.has(t.cluster_id)) {
      throw Error(ErrorCode::BadChannel,
                  "cluster " + std::to_string(t.cluster_id) + " has no frequency range");
    }
  }
  const int channels = plan.channels_per_range();

  std::map<int, std::vector<int>> levels;  // height -> ids, ascending
  for (const auto& [id, p] : placement) levels[p.height].push_back(id);

  Schedule s;
  int base = 1;
  for (const auto& [height, ids] : levels) {
    std::vector<int> visited;
    int level_max = base;
    for (int i : ids) {
      const Placement& pi = placement.at(i);
      std::vector<int> rivals;  // same cluster, one or two hops away
      for (int j : visited) {
        if (placement.at(j).cluster == pi.cluster && within_two_hops(graph, i, j)) {
          rivals.push_back(j);
        }
      }
      int slot = base;
      int channel = 0;
      for (bool clash = true; clash;) {
        clash = false;
        for (int j : rivals) {
          const bool sibling = placement.at(j).parent == pi.parent;
          if (s.slot[j] != slot) continue;
          if (sibling) {
            ++slot;
          } else if (s.channel[j] == channel) {
            if (++channel == channels) {
              channel = 0;
              ++slot;
              if (overflows != nullptr) {
                overflows->conflicts.push_back({i, j, ConflictReason::ChannelOverflow});
              }
            }
          } else {
            continue;
          }
          clash = true;
          break;
        }
      }
      s.slot[i] = slot;
      s.channel[i] = channel;
      s.cluster[i] = pi.cluster;
      visited.push_back(i);
      level_max = std::max(level_max, slot);
    }
    base = level_max + 1;
  }

  for (const auto& [id, slot] : s.slot) s.t_max = std::max(s.t_max, slot);
  std::map<int, std::set<int>> distinct;
  for (const auto& [id, ch] : s.channel) distinct[s.cluster.at(id)].insert(ch);
  for (const auto& [c, set] : distinct) s.channels_used[c] = static_cast<int>(set.size());
  return s;
}

Schedule invert_slots(const Schedule& schedule) {
  Schedule out = schedule;
  for (auto& [id, t] : out.slot) t = schedule.t_max - t + 1;
  return out;
}

Schedule build_schedule(const std::vector<AggregationTree>& trees, const NeighborGraph& graph,
                        const FrequencyPlan& plan) {
  return invert_slots(assign_slots(trees, graph, plan));
}

ConflictReport validate_schedule(const Schedule& schedule,
                                 const std::vector<AggregationTree>& trees,
                                 const NeighborGraph& graph, int channels_per_range) {
  ConflictReport report;
  const auto placement = index_trees(trees);
  std::vector<int> ids;
  for (const auto& [id, p] : placement) ids.push_back(id);

  for (int id : ids) {
    const auto slot = schedule.slot.find(id);
    const auto channel = schedule.channel.find(id);
    if (slot == schedule.slot.end() || channel == schedule.channel.end() || slot->second < 1 ||
        slot->second > schedule.t_max) {
      report.conflicts.push_back({id, id, ConflictReason::ChildNotBeforeParent});
      continue;
    }
    if (channel->second < 0 || channel->second >= channels_per_range) {
      report.conflicts.push_back({id, id, ConflictReason::ChannelOverflow});
    }
    const int parent = placement.at(id).parent;
    if (parent >= 0) {
      const auto ps = schedule.slot.find(parent);
      if (ps == schedule.slot.end() || !(slot->second < ps->second)) {
        report.conflicts.push_back({id, parent, ConflictReason::ChildNotBeforeParent});
      }
    }
  }

  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      const int i = ids[a];
      const int j = ids[b];
      const Placement& pi = placement.at(i);
      const Placement& pj = placement.at(j);
      if (pi.cluster != pj.cluster || pi.height != pj.height) continue;
      if (!schedule.slot.contains(i) || !schedule.slot.contains(j)) continue;
      if (schedule.slot.at(i) != schedule.slot.at(j)) continue;
      if (schedule.channel.at(i) == schedule.channel.at(j) && within_two_hops(graph, i, j)) {
        report.conflicts.push_back({i, j, ConflictReason::SameSlotSameChannelInterfering});
      } else if (pi.parent >= 0 && pi.parent == pj.parent) {
        report.conflicts.push_back({i, j, ConflictReason::SiblingSlotShared});
      }
    }
  }
  return report;
}

}  // namespace wsnagg
