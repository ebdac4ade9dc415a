#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "wsnagg/fdma_allocator.hpp"
#include "wsnagg/lifetime_tree.hpp"
#include "wsnagg/neighbor_graph.hpp"

namespace wsnagg {

struct Schedule {
  std::map<int, int> slot;     // node -> slot, 1-based
  std::map<int, int> channel;  // node -> channel index within its cluster's range
  std::map<int, int> cluster;  // node -> cluster id
  int t_max = 0;
  std::map<int, int> channels_used;  // cluster -> number of distinct channels in use

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

enum class ConflictReason {
  SameSlotSameChannelInterfering,
  SiblingSlotShared,
  ChildNotBeforeParent,
  ChannelOverflow,
};

std::string_view to_string(ConflictReason reason);

struct Conflict {
  int node_a;
  int node_b;
  ConflictReason reason;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

struct ConflictReport {
  std::vector<Conflict> conflicts;

  bool empty() const { return conflicts.empty(); }
};

/// Level-order slot/channel assignment over all trees at once (pre-inversion:
/// parents hold smaller slots than their children). Channel overflows that
/// fell back to a new slot are appended to `overflows` when given.
Schedule assign_slots(const std::vector<AggregationTree>& trees, const NeighborGraph& graph,
                      const FrequencyPlan& plan, ConflictReport* overflows = nullptr);

/// t -> t_max - t + 1 on every slot.
Schedule invert_slots(const Schedule& schedule);

/// assign_slots followed by invert_slots.
Schedule build_schedule(const std::vector<AggregationTree>& trees, const NeighborGraph& graph,
                        const FrequencyPlan& plan);

/// Exhaustive pairwise check of a post-inversion schedule.
ConflictReport validate_schedule(const Schedule& schedule,
                                 const std::vector<AggregationTree>& trees,
                                 const NeighborGraph& graph, int channels_per_range);

inline int cycle_length(const Schedule& schedule) { return schedule.t_max; }

}  // namespace wsnagg
