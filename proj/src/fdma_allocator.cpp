#include <algorithm>
#include <string>

#include "wsnagg/error.hpp"
#include "wsnagg/fdma_allocator.hpp"

namespace wsnagg {

FrequencyPlan::FrequencyPlan(Band band, int ranges, int channels_per_range)
    : band_(band), channels_(channels_per_range), total_ticks_(kTicksPerRange * ranges) {
  for (int i = 0; i < ranges; ++i) {
    free_pool_.push_back({kTicksPerRange * i, kTicksPerRange * (i + 1)});
  }
}

Band FrequencyPlan::to_hertz(TickInterval t) const {
  auto at = [&](std::int64_t tick) {
    if (tick == 0) return band_.low;
    if (tick == total_ticks_) return band_.high;
    return band_.low + (band_.width() * static_cast<double>(tick)) /
                           static_cast<double>(total_ticks_);
  };
  return {at(t.start), at(t.end)};
}

Band FrequencyPlan::range(int cluster_id) const {
  const auto it = allocated_.find(cluster_id);
  if (it == allocated_.end()) {
    throw Error(ErrorCode::BadChannel, "cluster " + std::to_string(cluster_id) +
                                           " holds no frequency range");
  }
  return to_hertz(it->second);
}

FrequencyPlan partition_band(Band band, int k, int channels_per_range) {
  if (k < 1 || k > (1 << 20)) {
    throw Error(ErrorCode::InvalidScenario, "band partition count must be in [1, 2^20]");
  }
  if (!(band.low < band.high)) throw Error(ErrorCode::InvalidScenario, "empty band");
  if (channels_per_range < 1) {
    throw Error(ErrorCode::InvalidScenario, "channels_per_range must be >= 1");
  }
  return FrequencyPlan(band, k, channels_per_range);
}

FrequencyPlan request_allotment(const FrequencyPlan& plan, int cluster_id) {
  if (plan.has(cluster_id)) {
    throw Error(ErrorCode::DuplicateRequest,
                "cluster " + std::to_string(cluster_id) + " already holds a range");
  }
  if (plan.free_pool_.empty()) {
    throw Error(ErrorCode::NoFreeRange,
                "no free range for cluster " + std::to_string(cluster_id));
  }
  FrequencyPlan next = plan;
  next.allocated_[cluster_id] = next.free_pool_.front();
  next.free_pool_.erase(next.free_pool_.begin());
  return next;
}

FrequencyPlan withdraw_half(const FrequencyPlan& plan, int new_cluster,
                            const std::map<int, double>& data_rates) {
  if (plan.allocated_.empty()) {
    throw Error(ErrorCode::NothingToWithdraw, "no allocated cluster to withdraw from");
  }
  if (plan.has(new_cluster)) {
    throw Error(ErrorCode::DuplicateRequest,
                "cluster " + std::to_string(new_cluster) + " already holds a range");
  }
  auto rate = [&](int c) {
    const auto it = data_rates.find(c);
    return it == data_rates.end() ? 0.0 : it->second;
  };
  // std::map iterates by ascending id, so strict < keeps the lowest id on ties.
  int donor = plan.allocated_.begin()->first;
  for (const auto& [c, range] : plan.allocated_) {
    if (rate(c) < rate(donor)) donor = c;
  }
  const TickInterval r = plan.allocated_.at(donor);
  if (r.width() < 2 || r.width() % 2 != 0) {
    throw Error(ErrorCode::NothingToWithdraw, "range of donor cluster " + std::to_string(donor) +
                                                  " is too narrow to halve");
  }
  const std::int64_t mid = r.start + r.width() / 2;
  FrequencyPlan next = plan;
  next.allocated_[donor] = {r.start, mid};
  next.allocated_[new_cluster] = {mid, r.end};
  return next;
}

Band channel_frequency(const FrequencyPlan& plan, int cluster_id, int channel_index) {
  const int c = plan.channels_per_range();
  if (channel_index < 0 || channel_index >= c) {
    throw Error(ErrorCode::BadChannel, "channel " + std::to_string(channel_index) +
                                           " outside [0, " + std::to_string(c) + ")");
  }
  const Band r = plan.range(cluster_id);
  auto edge = [&](int i) {
    if (i == 0) return r.low;
    if (i == c) return r.high;
    return r.low + (r.width() * i) / c;
  };
  return {edge(channel_index), edge(channel_index + 1)};
}

}  // namespace wsnagg
