#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "wsnagg/error.hpp"
#include "wsnagg/scenario.hpp"

namespace wsnagg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::DegenerateLikelihood: return "DegenerateLikelihood";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::CoincidentNodes: return "CoincidentNodes";
    case ErrorCode::ClusterDead: return "ClusterDead";
    case ErrorCode::ClusterPartitioned: return "ClusterPartitioned";
    case ErrorCode::DuplicateRequest: return "DuplicateRequest";
    case ErrorCode::NoFreeRange: return "NoFreeRange";
    case ErrorCode::NothingToWithdraw: return "NothingToWithdraw";
    case ErrorCode::BadChannel: return "BadChannel";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::vector<Vec2> Scenario::positions() const {
  std::vector<Vec2> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.position);
  return out;
}

std::vector<int> Scenario::source_ids() const {
  std::vector<int> out;
  for (const auto& n : nodes) {
    if (n.id != sink_id) out.push_back(n.id);
  }
  return out;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidScenario, what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void validate_scenario(const Scenario& s) {
  require(std::isfinite(s.width) && s.width > 0.0 && std::isfinite(s.height) && s.height > 0.0,
          "area must have positive finite width and height");
  require(!s.nodes.empty(), "scenario has no nodes");
  const int n = static_cast<int>(s.nodes.size());
  for (int i = 0; i < n; ++i) {
    const auto& node = s.nodes[static_cast<std::size_t>(i)];
    require(node.id == i, "node ids must be the contiguous range 0..N-1 in order (row " +
                              std::to_string(i) + " has id " + std::to_string(node.id) + ")");
    require(std::isfinite(node.position.x) && std::isfinite(node.position.y) &&
                node.position.x >= 0.0 && node.position.x <= s.width && node.position.y >= 0.0 &&
                node.position.y <= s.height,
            "node " + std::to_string(i) + " lies outside the area");
    require(finite_nonneg(node.residual_energy),
            "node " + std::to_string(i) + " has negative or non-finite energy");
  }
  require(s.sink_id >= 0 && s.sink_id < n, "sink_id does not name a node");
  int sinks = 0;
  for (const auto& node : s.nodes) {
    if (node.role == NodeRole::Sink) {
      ++sinks;
      require(node.id == s.sink_id, "node " + std::to_string(node.id) +
                                        " has role sink but sink_id is " +
                                        std::to_string(s.sink_id));
    }
  }
  require(sinks == 1, "exactly one node must have role sink");

  require(s.k >= 1, "K must be >= 1");
  if (n - 1 < s.k) {
    throw Error(ErrorCode::TooFewNodes, "K = " + std::to_string(s.k) + " exceeds the " +
                                            std::to_string(n - 1) + " non-sink nodes");
  }
  require(std::isfinite(s.band.low) && std::isfinite(s.band.high) && s.band.low < s.band.high,
          "band must satisfy f_low < f_high");
  require(s.channels_per_range >= 1, "channels_per_range must be >= 1");
  require(std::isfinite(s.theta_em) && s.theta_em > 0.0, "theta_em must be > 0");
  require(s.max_em_iters >= 1, "max_em_iters must be >= 1");
  require(finite_nonneg(s.e_elec) && finite_nonneg(s.e_amp) && finite_nonneg(s.e_lpl) &&
              finite_nonneg(s.packet_bits),
          "energy constants and packet_bits must be >= 0");
  require(std::isfinite(s.comm_range) && s.comm_range > 0.0, "comm_range must be > 0");
  require(std::isfinite(s.interference_range) && s.interference_range >= s.comm_range,
          "interference_range must be >= comm_range");
  require(s.refresh_fraction > 0.0 && s.refresh_fraction <= 1.0,
          "refresh_fraction must lie in (0, 1]");
  require(s.max_rounds >= 0, "max_rounds must be >= 0");

  std::map<std::pair<double, double>, int> seen;
  for (const auto& node : s.nodes) {
    auto [it, inserted] = seen.emplace(std::pair{node.position.x, node.position.y}, node.id);
    if (!inserted) {
      throw Error(ErrorCode::CoincidentNodes, "nodes " + std::to_string(it->second) + " and " +
                                                 std::to_string(node.id) +
                                                 " share a position");
    }
  }
}

}  // namespace wsnagg
