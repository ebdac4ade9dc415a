#pragma once

// CSV and JSON renderings of pipeline results. CSV column orders:
//
//   clustering  node,cluster,responsibility
//   trees       cluster,node,parent,height,edge_key        (root: parent -1, empty key)
//   schedule    node,slot,channel,cluster
//   plan        cluster,start_hz,end_hz
//   metrics     round,tx_elec_j,tx_amp_j,rx_j,lpl_j,total_j,packets_delivered,
//               readings_delivered,readings_lost,deaths,max_latency_slots,t_max,
//               round_slots,clusters                       (data rounds only)
//   comparison  variant,rounds_completed,first_node_death_round,any_node_died,
//               tree_refresh_count,total_energy_spent,packets_delivered_to_sink
//
// Rows are sorted by their leading key columns. Doubles use the shortest
// round-trip form in both formats.

#include <string>
#include <vector>

#include <json.hpp>
#include "wsnagg/emd_clustering.hpp"
#include "wsnagg/fdma_allocator.hpp"
#include "wsnagg/hybrid_scheduler.hpp"
#include "wsnagg/lifetime_tree.hpp"
#include "wsnagg/sim_engine.hpp"

namespace wsnagg {

enum class OutputFormat { Csv, Json };

std::string clustering_csv(const Clustering& c);
std::string trees_csv(const std::vector<AggregationTree>& trees);
std::string schedule_csv(const Schedule& s);
std::string plan_csv(const FrequencyPlan& plan);
std::string metrics_csv(const SimMetrics& m);
std::string comparison_csv(const ComparisonReport& r);

nlohmann::json to_json(const Clustering& c);
nlohmann::json to_json(const std::vector<AggregationTree>& trees);
nlohmann::json to_json(const Schedule& s);
nlohmann::json to_json(const FrequencyPlan& plan);
nlohmann::json to_json(const SimMetrics& m);
nlohmann::json to_json(const ComparisonReport& r);

SimMetrics metrics_from_json(const nlohmann::json& j);

/// Pretty-printed with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace wsnagg
