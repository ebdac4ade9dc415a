#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "wsnagg/error.hpp"
#include "wsnagg/sim_engine.hpp"

namespace wsnagg {

EnergyBreakdown tx_energy_parts(const EnergyModel& model, double bits, double distance) {
  return {bits * model.e_elec, bits * (model.e_amp * (distance * distance)), 0.0, 0.0};
}

double tx_energy(const EnergyModel& model, double bits, double distance) {
  return bits * (model.e_elec + model.e_amp * (distance * distance));
}

double rx_energy(const EnergyModel& model, double bits) { return bits * model.e_elec; }

int aggregate(int child_packets, bool alive, bool aggregation) {
  if (!alive) return 0;
  return aggregation ? 1 : 1 + child_packets;
}

NetworkState NetworkState::from(const Scenario& s) {
  NetworkState st;
  st.sink_id = s.sink_id;
  for (const auto& n : s.nodes) {
    st.positions.push_back(n.position);
    st.initial.push_back(n.residual_energy);
    st.residual.push_back(n.residual_energy);
    st.spent.push_back(0.0);
    st.alive.push_back(n.id == s.sink_id || n.residual_energy > 0.0);
    st.radio.push_back(RadioState::Lpl);
  }
  return st;
}

std::vector<int> NetworkState::alive_sources() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (static_cast<int>(i) != sink_id && alive[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<double> NetworkState::usable_energy() const {
  std::vector<double> out(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    if (alive[i]) out[i] = residual[i];
  }
  return out;
}

namespace {

// Debit a node. A charge the node cannot cover kills it and debits nothing.
bool charge(NetworkState& st, int id, const EnergyBreakdown& cost, EnergyBreakdown& ledger,
            int& deaths) {
  if (id == st.sink_id) return true;
  const auto i = static_cast<std::size_t>(id);
  if (!st.alive[i]) return false;
  const double amount = cost.total();
  if (amount > st.residual[i]) {
    st.alive[i] = false;
    st.radio[i] = RadioState::Sleep;
    ++deaths;
    return false;
  }
  st.residual[i] -= amount;
  st.spent[i] += amount;
  ledger += cost;
  if (!(st.residual[i] > 0.0)) {
    st.residual[i] = 0.0;
    st.alive[i] = false;
    st.radio[i] = RadioState::Sleep;
    ++deaths;
  }
  return true;
}

}  // namespace

EpochResult broadcast_topology(NetworkState& state, const NeighborGraph& graph,
                               const EnergyModel& model, double comm_range) {
  EpochResult out;
  const double bits = model.packet_bits;
  std::vector<int> hop(state.size(), -1);
  std::deque<int> queue{state.sink_id};
  hop[static_cast<std::size_t>(state.sink_id)] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : graph.comm[static_cast<std::size_t>(u)]) {
      const auto vi = static_cast<std::size_t>(v);
      if (hop[vi] >= 0 || !state.alive[vi]) continue;
      hop[vi] = hop[static_cast<std::size_t>(u)] + 1;
      state.radio[vi] = RadioState::Lpl;
      const EnergyBreakdown listen{0.0, 0.0, rx_energy(model, bits), model.e_lpl * hop[vi]};
      if (!charge(state, v, listen, out.energy, out.deaths)) continue;
      ++out.nodes_reached;
      if (!state.alive[vi]) continue;
      if (charge(state, v, tx_energy_parts(model, bits, comm_range), out.energy, out.deaths) &&
          state.alive[vi]) {
        queue.push_back(v);
      }
    }
  }
  return out;
}

Configuration configure_trees(const Clustering& clustering, const NetworkState& state,
                              const NeighborGraph& graph, const Scenario& scenario, KeyMode mode,
                              bool strict) {
  Configuration cfg;
  cfg.clustering = clustering;
  const auto energies = state.usable_energy();
  const TreeInputs inputs{state.positions, energies, graph, mode};
  const Vec2 sink = state.positions[static_cast<std::size_t>(state.sink_id)];

  for (int c = 0; c < clustering.k(); ++c) {
    std::vector<int> members;
    for (int id : clustering.members(c)) {
      if (state.alive[static_cast<std::size_t>(id)]) members.push_back(id);
    }
    if (members.empty()) continue;
    const int root = select_sub_sink(members, state.positions, energies, sink);
    if (strict) {
      cfg.trees.push_back(build_tree(c, members, inputs, root));
    } else {
      std::vector<int> orphans;
      cfg.trees.push_back(build_reachable_tree(c, members, inputs, root, orphans));
      cfg.orphans.insert(cfg.orphans.end(), orphans.begin(), orphans.end());
    }
  }
  std::sort(cfg.orphans.begin(), cfg.orphans.end());

  cfg.plan = partition_band(scenario.band, std::max(clustering.k(), 1), scenario.channels_per_range);
  for (const auto& t : cfg.trees) cfg.plan = request_allotment(cfg.plan, t.cluster_id);
  cfg.schedule = build_schedule(cfg.trees, graph, cfg.plan);

  // Sub-sinks share one sink radio: serialize uplinks by ascending cluster id.
  int rank = 0;
  for (const auto& t : cfg.trees) cfg.uplink_slot[t.root] = cfg.schedule.t_max + rank++;
  cfg.round_slots = cfg.trees.empty() ? 0 : cfg.schedule.t_max + rank - 1;
  return cfg;
}

Configuration configure_network(const Scenario& scenario, const NetworkState& state,
                                const NeighborGraph& graph, KeyMode mode, bool strict) {
  const auto sources = state.alive_sources();
  const int k = std::min<int>(scenario.k, static_cast<int>(sources.size()));
  if (k < 1) throw Error(ErrorCode::TooFewNodes, "no alive source nodes to cluster");
  EmOptions options;
  options.theta = scenario.theta_em;
  options.max_iters = scenario.max_em_iters;
  const auto clustering = run_emd(scenario, sources, k, options);
  return configure_trees(clustering, state, graph, scenario, mode, strict);
}

RoundEntry run_round(NetworkState& state, const Configuration& config, const EnergyModel& model,
                     bool aggregation) {
  RoundEntry entry;
  entry.t_max = config.schedule.t_max;
  entry.round_slots = config.round_slots;
  entry.clusters = static_cast<int>(config.trees.size());
  const int expected = static_cast<int>(state.alive_sources().size());

  struct Holding {
    int packets = 0;   // received this round
    int readings = 0;  // source readings carried, own included
  };
  std::map<int, Holding> held;
  std::map<int, std::vector<int>> by_slot;  // slot -> transmitters, ascending id
  std::map<int, int> parent_of;
  for (const auto& t : config.trees) {
    for (int id : t.members()) {
      if (state.alive[static_cast<std::size_t>(id)]) held[id].readings = 1;
      const auto p = t.parent.find(id);
      if (p != t.parent.end()) {
        parent_of[id] = p->second;
        by_slot[config.schedule.slot.at(id)].push_back(id);
      } else {
        parent_of[id] = state.sink_id;
        by_slot[config.uplink_slot.at(id)].push_back(id);
      }
    }
  }
  for (auto& [slot, ids] : by_slot) std::sort(ids.begin(), ids.end());

  const double bits = model.packet_bits;
  for (const auto& [slot, senders] : by_slot) {
    for (int n : senders) {
      const auto ni = static_cast<std::size_t>(n);
      if (!state.alive[ni]) continue;
      const int p = parent_of.at(n);
      if (!state.alive[static_cast<std::size_t>(p)]) continue;
      Holding& mine = held[n];
      const int packets = aggregate(mine.packets, true, aggregation);
      const double distance = euclidean_distance(state.positions[ni],
                                                 state.positions[static_cast<std::size_t>(p)]);
      EnergyBreakdown tx = tx_energy_parts(model, bits, distance);
      tx.tx_elec *= packets;
      tx.tx_amp *= packets;
      if (!charge(state, n, tx, entry.energy, entry.deaths)) continue;
      const EnergyBreakdown rx{0.0, 0.0, rx_energy(model, bits) * packets, 0.0};
      if (!charge(state, p, rx, entry.energy, entry.deaths)) continue;
      if (p == state.sink_id) {
        entry.packets_delivered += packets;
        entry.readings_delivered += mine.readings;
        entry.max_latency_slots = std::max(entry.max_latency_slots, slot);
      } else {
        held[p].packets += packets;
        held[p].readings += mine.readings;
      }
      mine = {};
    }
  }

  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.alive[i] && static_cast<int>(i) != state.sink_id) state.radio[i] = RadioState::Sleep;
  }
  entry.readings_lost = expected - entry.readings_delivered;
  return entry;
}

bool needs_refresh(const NetworkState& state, const std::vector<AggregationTree>& trees,
                   double rho) {
  for (const auto& t : trees) {
    for (int id : t.members()) {
      const auto i = static_cast<std::size_t>(id);
      if (!state.alive[i]) return true;
      if (!t.is_leaf(id) && state.residual[i] < rho * t.energy_snapshot.at(id)) return true;
    }
  }
  return false;
}

namespace {

bool cluster_wiped(const Configuration& cfg, const NetworkState& state) {
  for (int c = 0; c < cfg.clustering.k(); ++c) {
    const auto members = cfg.clustering.members(c);
    if (std::none_of(members.begin(), members.end(),
                     [&](int id) { return state.alive[static_cast<std::size_t>(id)]; })) {
      return true;
    }
  }
  return false;
}

}  // namespace

SimMetrics run_simulation(const Scenario& scenario, KeyMode mode) {
  validate_scenario(scenario);
  SimMetrics m;
  NetworkState state = NetworkState::from(scenario);
  const NeighborGraph graph = build_neighbor_graph(scenario);
  const EnergyModel model = EnergyModel::from(scenario);

  for (std::size_t i = 0; i < state.size(); ++i) {
    if (static_cast<int>(i) != state.sink_id) {
      m.initial_total_energy += state.initial[i];
      if (!state.alive[i]) m.any_node_died = true;  // dead on arrival: round 0
    }
  }

  auto note_deaths = [&](int deaths, int rounds_before) {
    if (deaths > 0 && !m.any_node_died) {
      m.any_node_died = true;
      m.first_node_death_round = rounds_before;
    }
  };

  auto epoch = [&](EpochKind kind, int after_round) {
    const EpochResult r = broadcast_topology(state, graph, model, scenario.comm_range);
    m.epochs.push_back({after_round, kind, r.energy, r.nodes_reached, r.deaths});
    note_deaths(r.deaths, after_round);
  };

  Configuration cfg;
  bool configured = false;
  if (!state.alive_sources().empty()) {
    try {
      cfg = configure_network(scenario, state, graph, mode, true);
    } catch (const Error& e) {
      throw Error(e.code(), std::string("initial configuration: ") + e.what());
    }
    configured = true;
    epoch(EpochKind::Initial, 0);
  }

  for (int round = 1; configured && round <= scenario.max_rounds; ++round) {
    if (state.alive_sources().empty()) break;
    if (cluster_wiped(cfg, state)) {
      try {
        cfg = configure_network(scenario, state, graph, mode, false);
      } catch (const Error& e) {
        throw Error(e.code(), "reconfiguration before round " + std::to_string(round) + ": " +
                                  e.what());
      }
      ++m.recluster_count;
      epoch(EpochKind::Recluster, round - 1);
    } else if (needs_refresh(state, cfg.trees, scenario.refresh_fraction)) {
      cfg = configure_trees(cfg.clustering, state, graph, scenario, mode, false);
      ++m.tree_refresh_count;
      epoch(EpochKind::Refresh, round - 1);
    }
    if (state.alive_sources().empty()) break;

    RoundEntry r = run_round(state, cfg, model, scenario.aggregation);
    r.round = round;
    note_deaths(r.deaths, round - 1);
    m.packets_delivered_to_sink += r.packets_delivered;
    m.readings_delivered += r.readings_delivered;
    m.readings_lost += r.readings_lost;
    m.max_delivery_latency_slots = std::max(m.max_delivery_latency_slots, r.max_latency_slots);
    m.rounds.push_back(r);
    m.rounds_completed = round;
  }

  m.per_node_energy_spent = state.spent;
  for (std::size_t i = 0; i < state.size(); ++i) {
    m.total_energy_spent += state.spent[i];
    if (static_cast<int>(i) != state.sink_id) m.final_residual_energy += state.residual[i];
  }
  return m;
}

std::vector<TreeEdge> tree_edges(const std::vector<AggregationTree>& trees) {
  std::vector<TreeEdge> out;
  for (const auto& t : trees) {
    for (const auto& [child, parent] : t.parent) out.push_back({t.cluster_id, child, parent});
  }
  std::sort(out.begin(), out.end());
  return out;
}

ComparisonReport compare_baselines(const Scenario& scenario) {
  validate_scenario(scenario);
  ComparisonReport report;
  const NeighborGraph graph = build_neighbor_graph(scenario);
  for (KeyMode mode : {KeyMode::EnergyOverDistance, KeyMode::InverseDistance}) {
    BaselineRow row;
    row.mode = mode;
    row.variant = mode == KeyMode::EnergyOverDistance ? "energy_over_distance" : "distance_only";
    const NetworkState state = NetworkState::from(scenario);
    if (!state.alive_sources().empty()) {
      row.initial_edges = tree_edges(configure_network(scenario, state, graph, mode, true).trees);
    }
    row.metrics = run_simulation(scenario, mode);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace wsnagg
