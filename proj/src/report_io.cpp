#include <algorithm>
#include <string>
#include <type_traits>

#include "wsnagg/report_io.hpp"
#include "wsnagg/scenario_io.hpp"

namespace wsnagg {

using nlohmann::json;

namespace {

template <typename... Ts>
std::string row(const Ts&... fields) {
  std::string out;
  auto put = [&](const auto& f) {
    if (!out.empty()) out += ',';
    using T = std::decay_t<decltype(f)>;
    if constexpr (std::is_same_v<T, double>) out += format_double(f);
    else if constexpr (std::is_same_v<T, bool>) out += f ? "true" : "false";
    else if constexpr (std::is_arithmetic_v<T>) out += std::to_string(f);
    else out += f;
  };
  (put(fields), ...);
  return out + "\n";
}

json energy_json(const EnergyBreakdown& e) {
  return {{"tx_elec_j", e.tx_elec}, {"tx_amp_j", e.tx_amp}, {"rx_j", e.rx}, {"lpl_j", e.lpl}};
}

EnergyBreakdown energy_from(const json& j) {
  return {j.at("tx_elec_j").get<double>(), j.at("tx_amp_j").get<double>(),
          j.at("rx_j").get<double>(), j.at("lpl_j").get<double>()};
}

std::string_view epoch_name(EpochKind k) {
  switch (k) {
    case EpochKind::Initial: return "initial";
    case EpochKind::Refresh: return "refresh";
    case EpochKind::Recluster: return "recluster";
  }
  return "initial";
}

EpochKind epoch_from(const std::string& s) {
  if (s == "refresh") return EpochKind::Refresh;
  if (s == "recluster") return EpochKind::Recluster;
  return EpochKind::Initial;
}

}  // namespace

std::string clustering_csv(const Clustering& c) {
  std::string out = "node,cluster,responsibility\n";
  std::vector<std::size_t> order(c.node_ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return c.node_ids[a] < c.node_ids[b]; });
  for (std::size_t i : order) {
    const int cl = c.assignment[i];
    out += row(c.node_ids[i], cl, c.responsibilities(i, static_cast<std::size_t>(cl)));
  }
  return out;
}

std::string trees_csv(const std::vector<AggregationTree>& trees) {
  std::string out = "cluster,node,parent,height,edge_key\n";
  for (const auto& t : trees) {
    for (const auto& [id, h] : t.height) {
      if (id == t.root) out += row(t.cluster_id, id, -1, h, std::string());
      else out += row(t.cluster_id, id, t.parent.at(id), h, t.edge_key.at(id));
    }
  }
  return out;
}

std::string schedule_csv(const Schedule& s) {
  std::string out = "node,slot,channel,cluster\n";
  for (const auto& [id, slot] : s.slot) out += row(id, slot, s.channel.at(id), s.cluster.at(id));
  return out;
}

std::string plan_csv(const FrequencyPlan& plan) {
  std::string out = "cluster,start_hz,end_hz\n";
  for (const auto& [c, ticks] : plan.allocated()) {
    const Band b = plan.to_hertz(ticks);
    out += row(c, b.low, b.high);
  }
  return out;
}

std::string metrics_csv(const SimMetrics& m) {
  std::string out =
      "round,tx_elec_j,tx_amp_j,rx_j,lpl_j,total_j,packets_delivered,readings_delivered,"
      "readings_lost,deaths,max_latency_slots,t_max,round_slots,clusters\n";
  for (const auto& r : m.rounds) {
    out += row(r.round, r.energy.tx_elec, r.energy.tx_amp, r.energy.rx, r.energy.lpl,
               r.energy.total(), r.packets_delivered, r.readings_delivered, r.readings_lost,
               r.deaths, r.max_latency_slots, r.t_max, r.round_slots, r.clusters);
  }
  return out;
}

std::string comparison_csv(const ComparisonReport& r) {
  std::string out =
      "variant,rounds_completed,first_node_death_round,any_node_died,tree_refresh_count,"
      "total_energy_spent,packets_delivered_to_sink\n";
  for (const auto& b : r.rows) {
    const auto& m = b.metrics;
    out += row(b.variant, m.rounds_completed, m.first_node_death_round, m.any_node_died,
               m.tree_refresh_count, m.total_energy_spent, m.packets_delivered_to_sink);
  }
  return out;
}

json to_json(const Clustering& c) {
  json nodes = json::array();
  for (std::size_t i = 0; i < c.node_ids.size(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < c.responsibilities.cols(); ++k) r.push_back(c.responsibilities(i, k));
    nodes.push_back({{"node", c.node_ids[i]}, {"cluster", c.assignment[i]}, {"responsibilities", r}});
  }
  json comps = json::array();
  for (int k = 0; k < c.k(); ++k) {
    const auto& s = c.mixture.sigma[static_cast<std::size_t>(k)];
    const auto& mu = c.mixture.mu[static_cast<std::size_t>(k)];
    comps.push_back({{"pi", c.mixture.pi[static_cast<std::size_t>(k)]},
                     {"mu", {mu.x, mu.y}},
                     {"sigma", {{s.xx, s.xy}, {s.xy, s.yy}}}});
  }
  return {{"k", c.k()},
          {"final_log_likelihood", c.final_log_likelihood},
          {"iterations_used", c.iterations_used},
          {"converged", c.converged},
          {"log_likelihood_trace", c.log_likelihood_trace},
          {"components", comps},
          {"nodes", nodes}};
}

json to_json(const std::vector<AggregationTree>& trees) {
  json out = json::array();
  for (const auto& t : trees) {
    json edges = json::array();
    for (const auto& [child, parent] : t.parent) {
      edges.push_back({{"child", child}, {"parent", parent}, {"key", t.edge_key.at(child)},
                       {"height", t.height.at(child)}});
    }
    out.push_back({{"cluster", t.cluster_id},
                   {"root", t.root},
                   {"size", t.size()},
                   {"height", t.max_height()},
                   {"edges", edges}});
  }
  return out;
}

json to_json(const Schedule& s) {
  json rows = json::array();
  for (const auto& [id, slot] : s.slot) {
    rows.push_back({{"node", id}, {"slot", slot}, {"channel", s.channel.at(id)},
                    {"cluster", s.cluster.at(id)}});
  }
  json used = json::object();
  for (const auto& [c, n] : s.channels_used) used[std::to_string(c)] = n;
  return {{"t_max", s.t_max}, {"channels_used", used}, {"nodes", rows}};
}

json to_json(const FrequencyPlan& plan) {
  json ranges = json::array();
  for (const auto& [c, ticks] : plan.allocated()) {
    const Band b = plan.to_hertz(ticks);
    ranges.push_back({{"cluster", c}, {"start_hz", b.low}, {"end_hz", b.high}});
  }
  json pool = json::array();
  for (const auto& t : plan.free_pool()) {
    const Band b = plan.to_hertz(t);
    pool.push_back({b.low, b.high});
  }
  return {{"band", {plan.band().low, plan.band().high}},
          {"channels_per_range", plan.channels_per_range()},
          {"ranges", ranges},
          {"free_pool", pool}};
}

json to_json(const SimMetrics& m) {
  json epochs = json::array();
  for (const auto& e : m.epochs) {
    epochs.push_back({{"after_round", e.after_round},
                      {"kind", epoch_name(e.kind)},
                      {"energy", energy_json(e.energy)},
                      {"nodes_reached", e.nodes_reached},
                      {"deaths", e.deaths}});
  }
  json rounds = json::array();
  for (const auto& r : m.rounds) {
    rounds.push_back({{"round", r.round},
                      {"energy", energy_json(r.energy)},
                      {"packets_delivered", r.packets_delivered},
                      {"readings_delivered", r.readings_delivered},
                      {"readings_lost", r.readings_lost},
                      {"deaths", r.deaths},
                      {"max_latency_slots", r.max_latency_slots},
                      {"t_max", r.t_max},
                      {"round_slots", r.round_slots},
                      {"clusters", r.clusters}});
  }
  return {{"rounds_completed", m.rounds_completed},
          {"first_node_death_round", m.first_node_death_round},
          {"any_node_died", m.any_node_died},
          {"total_energy_spent", m.total_energy_spent},
          {"initial_total_energy", m.initial_total_energy},
          {"final_residual_energy", m.final_residual_energy},
          {"per_node_energy_spent", m.per_node_energy_spent},
          {"packets_delivered_to_sink", m.packets_delivered_to_sink},
          {"readings_delivered", m.readings_delivered},
          {"readings_lost", m.readings_lost},
          {"tree_refresh_count", m.tree_refresh_count},
          {"recluster_count", m.recluster_count},
          {"max_delivery_latency_slots", m.max_delivery_latency_slots},
          {"epochs", epochs},
          {"rounds", rounds}};
}

SimMetrics metrics_from_json(const json& j) {
  SimMetrics m;
  m.rounds_completed = j.at("rounds_completed").get<int>();
  m.first_node_death_round = j.at("first_node_death_round").get<int>();
  m.any_node_died = j.at("any_node_died").get<bool>();
  m.total_energy_spent = j.at("total_energy_spent").get<double>();
  m.initial_total_energy = j.at("initial_total_energy").get<double>();
  m.final_residual_energy = j.at("final_residual_energy").get<double>();
  m.per_node_energy_spent = j.at("per_node_energy_spent").get<std::vector<double>>();
  m.packets_delivered_to_sink = j.at("packets_delivered_to_sink").get<long long>();
  m.readings_delivered = j.at("readings_delivered").get<long long>();
  m.readings_lost = j.at("readings_lost").get<long long>();
  m.tree_refresh_count = j.at("tree_refresh_count").get<int>();
  m.recluster_count = j.at("recluster_count").get<int>();
  m.max_delivery_latency_slots = j.at("max_delivery_latency_slots").get<int>();
  for (const auto& e : j.at("epochs")) {
    m.epochs.push_back({e.at("after_round").get<int>(), epoch_from(e.at("kind").get<std::string>()),
                        energy_from(e.at("energy")), e.at("nodes_reached").get<int>(),
                        e.at("deaths").get<int>()});
  }
  for (const auto& r : j.at("rounds")) {
    RoundEntry e;
    e.round = r.at("round").get<int>();
    e.energy = energy_from(r.at("energy"));
    e.packets_delivered = r.at("packets_delivered").get<int>();
    e.readings_delivered = r.at("readings_delivered").get<int>();
    e.readings_lost = r.at("readings_lost").get<int>();
    e.deaths = r.at("deaths").get<int>();
    e.max_latency_slots = r.at("max_latency_slots").get<int>();
    e.t_max = r.at("t_max").get<int>();
    e.round_slots = r.at("round_slots").get<int>();
    e.clusters = r.at("clusters").get<int>();
    m.rounds.push_back(e);
  }
  return m;
}

json to_json(const ComparisonReport& r) {
  json rows = json::array();
  for (const auto& b : r.rows) {
    json edges = json::array();
    for (const auto& e : b.initial_edges) edges.push_back({e.cluster, e.child, e.parent});
    rows.push_back({{"variant", b.variant}, {"metrics", to_json(b.metrics)}, {"initial_edges", edges}});
  }
  return {{"rows", rows}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace wsnagg
