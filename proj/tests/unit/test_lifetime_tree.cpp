#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "oracles.hpp"
#include "wsnagg/error.hpp"
#include "wsnagg/lifetime_tree.hpp"
#include "wsnagg/random.hpp"

using namespace wsnagg;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

std::vector<int> iota_ids(int n) {
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
  return ids;
}

// Random node set whose comm graph is connected.
struct Cluster {
  std::vector<Vec2> pos;
  std::vector<double> energy;
  NeighborGraph graph;
};

Cluster random_cluster(Rng& rng, int n, double area, double comm, bool uniform_energy) {
  for (;;) {
    Cluster c;
    for (int i = 0; i < n; ++i) {
      c.pos.push_back({rng.uniform(0, area), rng.uniform(0, area)});
      c.energy.push_back(uniform_energy ? 1.0 : rng.uniform(0.01, 5.0));
    }
    c.graph = build_neighbor_graph(c.pos, comm, 2 * comm);
    bool ok = false;
    oracle::frontier_scan_tree(
        iota_ids(n), 0, [](int, int) { return 1.0; },
        [&](int u, int v) { return oracle::dist(c.pos[u], c.pos[v]) <= comm; }, ok);
    if (ok) return c;
  }
}

std::set<oracle::Edge> edge_set(const AggregationTree& t) {
  std::set<oracle::Edge> out;
  for (const auto& [c, p] : t.parent) out.insert({c, p});
  return out;
}

}  // namespace

TEST_CASE("edge_key examples") {
  CHECK(edge_key(10.0, 2.0) == 5.0);
  CHECK(edge_key(0.0, 7.0) == 0.0);
  CHECK(edge_key(6.0, 3.0) < edge_key(6.0, 2.0));
  CHECK(code_of([] { edge_key(1.0, 0.0); }) == ErrorCode::CoincidentNodes);
}

TEST_CASE("select_sub_sink") {
  const std::vector<Vec2> pos{{0, 0}, {3, 0}, {0, 5}, {7, 0}, {0, 3}};
  const std::vector<double> e{1, 1, 1, 1, 1};
  const std::vector<int> three{2, 3, 1};
  CHECK(select_sub_sink(three, pos, e, {0, 0}) == 1);

  const std::vector<int> tied{4, 1};
  CHECK(select_sub_sink(tied, pos, e, {0, 0}) == 1);

  const std::vector<int> one{3};
  CHECK(select_sub_sink(one, pos, e, {0, 0}) == 3);

  std::vector<double> drained = e;
  drained[1] = 0.0;
  CHECK(select_sub_sink(three, pos, drained, {0, 0}) == 2);

  const std::vector<double> dead{0, 0, 0, 0, 0};
  CHECK(code_of([&] { select_sub_sink(three, pos, dead, {0, 0}); }) == ErrorCode::ClusterDead);
}

TEST_CASE("build_tree small cases") {
  const std::vector<Vec2> pos{{0, 0}, {4, 0}, {8, 0}, {50, 50}};
  const std::vector<double> e{1, 2, 3, 4};
  const auto graph = build_neighbor_graph(pos, 5.0, 10.0);
  const TreeInputs in{pos, e, graph};

  SUBCASE("two nodes give a single forced edge") {
    const std::vector<int> nodes{0, 1};
    const auto t = build_tree(3, nodes, in, 0);
    CHECK(t.cluster_id == 3);
    CHECK(t.root == 0);
    CHECK(t.parent == std::map<int, int>{{1, 0}});
    CHECK(t.height.at(1) == 1);
    CHECK(t.edge_key.at(1) == doctest::Approx(0.25));
    CHECK(replay_check(t, nodes, in));
  }

  SUBCASE("chain keeps the only path") {
    const std::vector<int> nodes{0, 1, 2};
    const auto t = build_tree(0, nodes, in, 0);
    CHECK(t.parent == std::map<int, int>{{1, 0}, {2, 1}});
    CHECK(t.max_height() == 2);
    CHECK(t.insertion_order == std::vector<int>{0, 1, 2});
    CHECK(t.children(1) == std::vector<int>{2});
    CHECK(t.is_leaf(2));
  }

  SUBCASE("singleton cluster is a bare root") {
    const std::vector<int> nodes{3};
    const auto t = build_tree(1, nodes, in, 3);
    CHECK(t.parent.empty());
    CHECK(t.size() == 1);
    CHECK(t.max_height() == 0);
  }

  SUBCASE("unreachable members") {
    const std::vector<int> nodes{0, 1, 3};
    try {
      build_tree(0, nodes, in, 0);
      FAIL("expected ClusterPartitioned");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::ClusterPartitioned);
      CHECK(std::string(err.what()).find('3') != std::string::npos);
    }
    std::vector<int> orphans;
    const auto t = build_reachable_tree(0, nodes, in, 0, orphans);
    CHECK(orphans == std::vector<int>{3});
    CHECK(t.members() == std::vector<int>{0, 1});
  }
}

TEST_CASE("the parent with more energy wins over a shorter edge") {
  // Node 3 is 3 m from the weak node 1 and 3.16 m from the strong node 2.
  const std::vector<Vec2> pos{{0, 0}, {3, 0}, {0, 4}, {3, 3}};
  const std::vector<double> e{1, 0.1, 4, 1};
  const auto graph = build_neighbor_graph(pos, 9.0, 18.0);
  const std::vector<int> nodes{0, 1, 2, 3};
  const auto t = build_tree(0, nodes, TreeInputs{pos, e, graph}, 0);
  CHECK(t.parent.at(3) == 2);

  const auto t_dist =
      build_tree(0, nodes, TreeInputs{pos, e, graph, KeyMode::InverseDistance}, 0);
  CHECK(t_dist.parent.at(3) == 1);
}

TEST_CASE("build_tree matches the frontier-scan oracle on 200 random clusters") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const auto c = random_cluster(rng, n, 30.0, 20.0, false);
    const auto ids = iota_ids(n);
    const TreeInputs in{c.pos, c.energy, c.graph};
    const int root = select_sub_sink(ids, c.pos, c.energy, {0, 0});
    const auto tree = build_tree(0, ids, in, root);

    bool ok = false;
    const auto expect = oracle::frontier_scan_tree(
        ids, root,
        [&](int u, int v) {
          return c.energy[static_cast<std::size_t>(u)] /
                 oracle::dist(c.pos[static_cast<std::size_t>(u)], c.pos[static_cast<std::size_t>(v)]);
        },
        [&](int u, int v) { return c.graph.comm_linked(u, v); }, ok);
    REQUIRE(ok);
    REQUIRE(tree.insertion_order.size() == expect.size() + 1);
    for (std::size_t i = 0; i < expect.size(); ++i) {
      const int child = tree.insertion_order[i + 1];
      CHECK(child == expect[i].first);
      CHECK(tree.parent.at(child) == expect[i].second);
    }
    CHECK(replay_check(tree, ids, in));
    CHECK(oracle::is_spanning_tree(std::set<int>(ids.begin(), ids.end()), root, tree.parent));
    for (const auto& [child, parent] : tree.parent) {
      CHECK(tree.height.at(child) == tree.height.at(parent) + 1);
      CHECK(std::isfinite(tree.edge_key.at(child)));
      CHECK(tree.edge_key.at(child) >= 0.0);
    }
  }
}

TEST_CASE("uniform energy gives the minimum-distance Prim tree") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(29));
    const auto c = random_cluster(rng, n, 60.0, 25.0, true);
    const auto ids = iota_ids(n);
    const int root = select_sub_sink(ids, c.pos, c.energy, {0, 0});
    const auto tree = build_tree(0, ids, TreeInputs{c.pos, c.energy, c.graph}, root);
    CHECK(edge_set(tree) == oracle::min_distance_prim(ids, root, c.pos, 25.0));
  }
}

TEST_CASE("scaling every energy leaves the tree unchanged") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(15));
    const auto c = random_cluster(rng, n, 40.0, 20.0, false);
    const auto ids = iota_ids(n);
    const auto base = build_tree(0, ids, TreeInputs{c.pos, c.energy, c.graph}, 0);
    for (double k : {0.5, 3.0, 1000.0}) {
      std::vector<double> scaled = c.energy;
      for (auto& v : scaled) v *= k;
      const auto t = build_tree(0, ids, TreeInputs{c.pos, scaled, c.graph}, 0);
      CHECK(t.parent == base.parent);
    }
  }
}

TEST_CASE("replay_check rejects a parent swapped to a lower-key edge") {
  Rng rng(91);
  int planted = 0;
  for (int trial = 0; trial < 100 && planted < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(8));
    const auto c = random_cluster(rng, n, 30.0, 20.0, false);
    const auto ids = iota_ids(n);
    const TreeInputs in{c.pos, c.energy, c.graph};
    auto tree = build_tree(0, ids, in, 0);
    REQUIRE(replay_check(tree, ids, in));
    // Find a child with an earlier-inserted neighbor of strictly lower key.
    bool done = false;
    for (std::size_t i = 1; i < tree.insertion_order.size() && !done; ++i) {
      const int child = tree.insertion_order[i];
      for (std::size_t j = 0; j < i && !done; ++j) {
        const int alt = tree.insertion_order[j];
        if (alt == tree.parent.at(child) || !c.graph.comm_linked(alt, child)) continue;
        if (edge_key(in, alt, child) < edge_key(in, tree.parent.at(child), child)) {
          tree.parent[child] = alt;
          done = true;
        }
      }
    }
    if (!done) continue;
    ++planted;
    CHECK_FALSE(replay_check(tree, ids, in));
  }
  CHECK(planted == 20);
}
