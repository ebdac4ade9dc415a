#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scenarios.hpp"
#include "wsnagg/scenario_io.hpp"
#include "wsnagg/sim_engine.hpp"

using namespace wsnagg;

namespace {

const EnergyModel kModel{50e-9, 100e-12, 0.0, 1000};

Scenario line_scenario(int sources, double spacing, double energy) {
  std::vector<Vec2> pos;
  std::vector<double> e;
  for (int i = 0; i <= sources; ++i) {
    pos.push_back({spacing * i, 0});
    e.push_back(i == 0 ? 0.0 : energy);
  }
  return oracle::make_scenario(pos, e, 1, spacing * 1.2, spacing * 2.4);
}

double spent_sum(const SimMetrics& m) {
  double s = 0;
  for (double v : m.per_node_energy_spent) s += v;
  return s;
}

Scenario scaled(const Scenario& s, double c) {
  Scenario out = s;
  out.width *= c;
  out.height *= c;
  out.comm_range *= c;
  out.interference_range *= c;
  for (auto& n : out.nodes) n.position = {n.position.x * c, n.position.y * c};
  return out;
}

}  // namespace

TEST_CASE("energy model examples") {
  CHECK(tx_energy(kModel, 1000, 10) == doctest::Approx(6.0e-5).epsilon(1e-12));
  CHECK(tx_energy(kModel, 1000, 20) == doctest::Approx(9.0e-5).epsilon(1e-12));
  CHECK(tx_energy(kModel, 0, 20) == 0.0);
  const auto parts = tx_energy_parts(kModel, 1000, 10);
  CHECK(parts.tx_elec + parts.tx_amp == doctest::Approx(tx_energy(kModel, 1000, 10)));
  CHECK(tx_energy_parts(kModel, 1000, 20).tx_amp == 4 * parts.tx_amp);

  CHECK(rx_energy(kModel, 1000) == doctest::Approx(5.0e-5).epsilon(1e-12));
  CHECK(rx_energy(kModel, 0) == 0.0);
  CHECK(rx_energy({0.0, 1.0, 1.0, 1.0}, 1e6) == 0.0);
}

TEST_CASE("aggregate") {
  CHECK(aggregate(0, true) == 1);
  CHECK(aggregate(5, true) == 1);
  CHECK(aggregate(5, false) == 0);
  CHECK(aggregate(5, true, false) == 6);
  CHECK(aggregate(0, false, false) == 0);
}

TEST_CASE("one source and the sink") {
  auto s = line_scenario(1, 30, 2.0);
  s.max_rounds = 5;
  const auto m = run_simulation(s);
  const auto model = EnergyModel::from(s);
  REQUIRE(m.rounds_completed == 5);
  CHECK(m.packets_delivered_to_sink == 5);
  for (const auto& r : m.rounds) {
    CHECK(r.energy.total() == doctest::Approx(tx_energy(model, s.packet_bits, 30)).epsilon(1e-12));
    CHECK(r.packets_delivered == 1);
    CHECK(r.readings_lost == 0);
  }
  REQUIRE(m.epochs.size() == 1);
  CHECK(m.epochs[0].energy.total() ==
        doctest::Approx(rx_energy(model, s.packet_bits) + tx_energy(model, s.packet_bits, 36) +
                        s.e_lpl)
            .epsilon(1e-12));
  CHECK(m.per_node_energy_spent[0] == 0.0);
  CHECK_FALSE(m.any_node_died);
  CHECK(m.first_node_death_round == 0);
}

TEST_CASE("three-level chain cascades within one cycle") {
  auto s = line_scenario(3, 10, 2.0);
  s.max_rounds = 1;
  const auto m = run_simulation(s);
  REQUIRE(m.rounds.size() == 1);
  const auto& r = m.rounds[0];
  CHECK(r.t_max == 3);
  CHECK(r.packets_delivered == 1);
  CHECK(r.readings_delivered == 3);
  CHECK(r.max_latency_slots == r.t_max);
  const auto model = EnergyModel::from(s);
  CHECK(r.energy.total() ==
        doctest::Approx(3 * tx_energy(model, s.packet_bits, 10) + 2 * rx_energy(model, s.packet_bits))
            .epsilon(1e-12));
}

TEST_CASE("dead networks spend nothing") {
  SUBCASE("all sources dead on arrival") {
    auto s = line_scenario(3, 10, 0.0);
    const auto m = run_simulation(s);
    CHECK(m.rounds_completed == 0);
    CHECK(m.total_energy_spent == 0.0);
    CHECK(m.packets_delivered_to_sink == 0);
    CHECK(m.any_node_died);
    CHECK(m.first_node_death_round == 0);
    CHECK(m.epochs.empty());
  }

  SUBCASE("run_round over dead nodes") {
    const auto s = line_scenario(3, 10, 2.0);
    auto state = NetworkState::from(s);
    const auto graph = build_neighbor_graph(s);
    const auto cfg = configure_network(s, state, graph, KeyMode::EnergyOverDistance, true);
    for (std::size_t i = 1; i < state.size(); ++i) state.alive[i] = false;
    const auto before = state.residual;
    const auto r = run_round(state, cfg, EnergyModel::from(s), true);
    CHECK(r.energy.total() == 0.0);
    CHECK(r.packets_delivered == 0);
    CHECK(state.residual == before);
  }
}

TEST_CASE("broadcast_topology") {
  const EnergyModel model{50e-9, 100e-12, 1e-6, 4000};

  SUBCASE("connected line: each source pays once, the sink nothing") {
    const auto s = line_scenario(4, 10, 1.0);
    auto state = NetworkState::from(s);
    const auto r = broadcast_topology(state, build_neighbor_graph(s), model, s.comm_range);
    CHECK(r.nodes_reached == 4);
    CHECK(state.spent[0] == 0.0);
    for (int i = 1; i <= 4; ++i) {
      const double expect = rx_energy(model, 4000) + tx_energy(model, 4000, s.comm_range) + 1e-6 * i;
      CHECK(state.spent[static_cast<std::size_t>(i)] == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(r.energy.rx == doctest::Approx(4 * rx_energy(model, 4000)));
  }

  SUBCASE("isolated node is not reached") {
    auto s = line_scenario(2, 10, 1.0);
    s.nodes.push_back({3, {90, 90}, 1.0, NodeRole::Source, RadioState::Lpl, std::nullopt});
    s.width = s.height = 100;
    auto state = NetworkState::from(s);
    const auto r = broadcast_topology(state, build_neighbor_graph(s), model, s.comm_range);
    CHECK(r.nodes_reached == 2);
    CHECK(state.spent[3] == 0.0);
  }

  SUBCASE("sink only") {
    const auto s = line_scenario(0, 10, 1.0);
    auto state = NetworkState::from(s);
    const auto r = broadcast_topology(state, build_neighbor_graph(s), model, s.comm_range);
    CHECK(r.nodes_reached == 0);
    CHECK(r.energy.total() == 0.0);
  }

  SUBCASE("a node that cannot afford the receive dies without being charged") {
    auto s = line_scenario(2, 10, 1.0);
    s.nodes[2].residual_energy = 1e-9;
    auto state = NetworkState::from(s);
    const auto r = broadcast_topology(state, build_neighbor_graph(s), model, s.comm_range);
    CHECK(r.deaths == 1);
    CHECK_FALSE(state.alive[2]);
    CHECK(state.residual[2] == 1e-9);
    CHECK(state.spent[2] == 0.0);
  }
}

TEST_CASE("needs_refresh") {
  const auto s = line_scenario(3, 10, 2.0);
  auto state = NetworkState::from(s);
  const auto graph = build_neighbor_graph(s);
  const auto cfg = configure_network(s, state, graph, KeyMode::EnergyOverDistance, true);
  REQUIRE(cfg.trees.size() == 1);
  REQUIRE(cfg.trees[0].parent == std::map<int, int>{{2, 1}, {3, 2}});

  CHECK_FALSE(needs_refresh(state, cfg.trees, 0.1));

  auto parent_dead = state;
  parent_dead.alive[2] = false;
  CHECK(needs_refresh(parent_dead, cfg.trees, 0.1));

  auto drained = state;
  drained.residual[2] = 0.05 * 2.0;
  CHECK(needs_refresh(drained, cfg.trees, 0.1));

  auto leaf_low = state;
  leaf_low.residual[3] = 0.05 * 2.0;
  CHECK_FALSE(needs_refresh(leaf_low, cfg.trees, 0.1));
}

TEST_CASE("max_rounds = 0 costs only the configuration epoch") {
  auto s = generate_random_scenario(20, 100, 100, 2, 3);
  s.max_rounds = 0;
  const auto m = run_simulation(s);
  CHECK(m.rounds_completed == 0);
  CHECK(m.rounds.empty());
  REQUIRE(m.epochs.size() == 1);
  CHECK(m.total_energy_spent == doctest::Approx(m.epochs[0].energy.total()).epsilon(1e-12));
}

TEST_CASE("simulations are deterministic and conserve energy") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto d = testgen::dense(0.05, 200);
    const auto s = testgen::connected_scenario(30, 3, seed, d).scenario;
    const auto a = run_simulation(s);
    const auto b = run_simulation(s);
    CHECK(a == b);
    CHECK(std::abs(a.initial_total_energy - a.final_residual_energy - a.total_energy_spent) < 1e-9);
    CHECK(std::abs(a.total_energy_spent - spent_sum(a)) < 1e-9);
    double ledger = 0;
    for (const auto& e : a.epochs) ledger += e.energy.total();
    for (const auto& r : a.rounds) ledger += r.energy.total();
    CHECK(std::abs(ledger - a.total_energy_spent) < 1e-9);
  }
}

TEST_CASE("rounds with every node alive deliver one packet per cluster") {
  const auto d = testgen::dense(0.05, 300);
  const auto s = testgen::connected_scenario(40, 4, 17, d).scenario;
  auto state = NetworkState::from(s);
  const auto graph = build_neighbor_graph(s);
  const auto cfg = configure_network(s, state, graph, KeyMode::EnergyOverDistance, true);
  const auto model = EnergyModel::from(s);
  std::vector<bool> was_alive = state.alive;
  for (int round = 0; round < 300; ++round) {
    const bool all_alive = state.alive_sources().size() + 1 == state.size();
    const auto r = run_round(state, cfg, model, true);
    if (all_alive && r.deaths == 0) {
      CHECK(r.packets_delivered == static_cast<int>(cfg.trees.size()));
      CHECK(r.readings_lost == 0);
      CHECK(r.max_latency_slots <= cfg.round_slots);
    }
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (!was_alive[i]) CHECK_FALSE(state.alive[i]);
    }
    was_alive = state.alive;
  }
}

TEST_CASE("uniform energy makes both tree builders agree") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = testgen::dense(2.0, 25);
    const auto s = testgen::connected_scenario(30, 3, seed, d).scenario;
    const auto report = compare_baselines(s);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].metrics.tree_refresh_count == 0);
    CHECK(report.rows[0].initial_edges == report.rows[1].initial_edges);
    CHECK(report.rows[0].metrics == report.rows[1].metrics);
  }
}

TEST_CASE("the energy-aware tree routes around a drained relay") {
  const auto s = oracle::make_scenario({{0, 0}, {10, 0}, {20, 0}, {30, 0}}, {0, 2, 0.001, 2}, 1,
                                       25, 50);
  const auto report = compare_baselines(s);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].variant == "energy_over_distance");
  CHECK(report.rows[1].variant == "distance_only");
  const std::vector<TreeEdge> energy_aware{{0, 2, 1}, {0, 3, 1}};
  const std::vector<TreeEdge> distance_only{{0, 2, 1}, {0, 3, 2}};
  CHECK(report.rows[0].initial_edges == energy_aware);
  CHECK(report.rows[1].initial_edges == distance_only);
}

TEST_CASE("dead-on-arrival comparison") {
  const auto s = line_scenario(3, 10, 0.0);
  const auto report = compare_baselines(s);
  REQUIRE(report.rows.size() == 2);
  for (const auto& row : report.rows) {
    CHECK(row.metrics.first_node_death_round == 0);
    CHECK(row.metrics.packets_delivered_to_sink == 0);
    CHECK(row.initial_edges.empty());
  }
}

TEST_CASE("doubling every distance quadruples the amplifier energy") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = testgen::dense(50.0, 10);
    const auto s = testgen::connected_scenario(25, 2, seed, d).scenario;
    const auto big = scaled(s, 2.0);
    const auto a = run_simulation(s);
    const auto b = run_simulation(big);
    REQUIRE(a.rounds.size() == b.rounds.size());
    REQUIRE(a.epochs.size() == b.epochs.size());
    REQUIRE(a.tree_refresh_count == 0);
    for (std::size_t i = 0; i < a.rounds.size(); ++i) {
      CHECK(b.rounds[i].energy.tx_amp == 4.0 * a.rounds[i].energy.tx_amp);
      CHECK(b.rounds[i].energy.tx_elec == a.rounds[i].energy.tx_elec);
      CHECK(b.rounds[i].energy.rx == a.rounds[i].energy.rx);
    }
    for (std::size_t i = 0; i < a.epochs.size(); ++i) {
      CHECK(b.epochs[i].energy.tx_amp == 4.0 * a.epochs[i].energy.tx_amp);
    }
  }
}
