#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wsnagg/scenario.hpp"

namespace wsnagg {

/// Half-open interval of band ticks. Each range produced by partition_band is
/// kTicksPerRange ticks wide, so up to 40 nested halvings stay exact.
struct TickInterval {
  std::int64_t start = 0;
  std::int64_t end = 0;

  std::int64_t width() const { return end - start; }
  friend bool operator==(const TickInterval&, const TickInterval&) = default;
};

inline constexpr std::int64_t kTicksPerRange = std::int64_t{1} << 40;

class FrequencyPlan {
 public:
  FrequencyPlan() = default;
  FrequencyPlan(Band band, int ranges, int channels_per_range);

  const Band& band() const { return band_; }
  int channels_per_range() const { return channels_; }
  std::int64_t total_ticks() const { return total_ticks_; }

  const std::map<int, TickInterval>& allocated() const { return allocated_; }
  const std::vector<TickInterval>& free_pool() const { return free_pool_; }
  bool has(int cluster_id) const { return allocated_.contains(cluster_id); }

  /// Hertz endpoints of an allocated range. Throws BadChannel if unallocated.
  Band range(int cluster_id) const;
  Band to_hertz(TickInterval t) const;

  friend bool operator==(const FrequencyPlan&, const FrequencyPlan&) = default;

 private:
  friend FrequencyPlan request_allotment(const FrequencyPlan&, int);
  friend FrequencyPlan withdraw_half(const FrequencyPlan&, int, const std::map<int, double>&);

  Band band_;
  int channels_ = 1;
  std::int64_t total_ticks_ = 0;
  std::map<int, TickInterval> allocated_;
  std::vector<TickInterval> free_pool_;  // ascending
};

/// Split the band into k equal ranges, all in the free pool.
FrequencyPlan partition_band(Band band, int k, int channels_per_range = 1);

/// Give the lowest free range to cluster_id.
/// Throws DuplicateRequest or NoFreeRange.
FrequencyPlan request_allotment(const FrequencyPlan& plan, int cluster_id);

/// Halve the range of the lowest-rate cluster (ties to lowest id) and hand the
/// upper half to new_cluster. Clusters missing from data_rates count as rate 0.
/// Throws NothingToWithdraw or DuplicateRequest.
FrequencyPlan withdraw_half(const FrequencyPlan& plan, int new_cluster,
                            const std::map<int, double>& data_rates);

/// channel_index-th of the plan's C equal subdivisions of the cluster's range.
/// Throws BadChannel.
Band channel_frequency(const FrequencyPlan& plan, int cluster_id, int channel_index);

}  // namespace wsnagg
