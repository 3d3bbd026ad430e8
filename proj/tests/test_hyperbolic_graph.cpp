#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "graph_helpers.hpp"

using namespace scube;
using scube::testing::caterpillar;
using scube::testing::delta_oracle;

TEST_CASE("delta: trees are 0, cycles match the brute-force oracle") {
  CHECK(compute_delta(path_graph(15)) == 0);
  CHECK(compute_delta(caterpillar(1, 30, 5, 2)) == 0);
  HypGraph c8 = cycle_graph(8);
  CHECK(compute_delta(c8) == delta_oracle(c8));
  CHECK(compute_delta(c8) == 2);
  HypGraph c5 = cycle_graph(5);
  CHECK(compute_delta(c5) == delta_oracle(c5));
  // a path with delta forced off the tree shortcut
  HypGraph sq = cycle_graph(4);
  CHECK(compute_delta(sq) == delta_oracle(sq));
}

TEST_CASE("geodesic chooser: length, symmetry, determinism") {
  HypGraph g = path_graph(20);
  GeodesicChooser ch{&g};
  auto l = ch.between(0, 20);
  REQUIRE(l.size() == 21);
  for (int i = 0; i <= 20; ++i) CHECK(l[i] == i);
  auto l2 = ch.between(20, 0);
  std::reverse(l2.begin(), l2.end());
  CHECK(l == l2);

  HypGraph c = cycle_graph(8);
  GeodesicChooser chc{&c};
  auto p = chc.between(0, 4);
  CHECK(p.size() == 5);
  CHECK(p == chc.between(0, 4));  // deterministic
  auto q = chc.between(4, 0);
  std::reverse(q.begin(), q.end());
  CHECK(p == q);
  // set-to-set distance realization
  auto s = chc.between(std::vector<int>{0, 1}, std::vector<int>{4, 5});
  CHECK((int)s.size() - 1 == 3);
}

TEST_CASE("epsilon setups on P20") {
  HypGraph g = path_graph(20);
  CHECK_NOTHROW(build_setup(g, 0, 20, {}, 0));  // Y empty always valid
  EpsilonSetup s = build_setup(g, 0, 20, {2, 3, 10}, 2);
  CHECK(s.lambda.size() == 21);
  CHECK(s.eps_prime == 3);  // delta 0 on a path
  // off-path vertex at distance 3
  HypGraph h = path_graph(20);
  int prev = 5;
  for (int j = 0; j < 3; ++j) {
    h.adj.emplace_back();
    ++h.n;
    h.add_edge(prev, h.n - 1);
    prev = h.n - 1;
  }
  CHECK_THROWS_WITH_AS(build_setup(h, 0, 20, {2, 3, 10, prev}, 2),
                       doctest::Contains("PointTooFar"), SpecError);
}

TEST_CASE("clusters on P20 and the trivial cases") {
  HypGraph g = path_graph(20);
  EpsilonSetup s0 = build_setup(g, 0, 20, {}, 0);
  auto c0 = build_clusters(s0, 2);
  REQUIRE(c0.clusters.size() == 2);
  CHECK(c0.clusters[0] == std::vector<int>{0});
  CHECK(c0.clusters[1] == std::vector<int>{20});

  EpsilonSetup s = build_setup(g, 0, 20, {2, 3, 10}, 2);
  auto cp = build_clusters(s, 2);
  REQUIRE(cp.clusters.size() == 4);
  CHECK(cp.clusters[0] == std::vector<int>{0});
  CHECK(cp.clusters[1] == std::vector<int>{2, 3});
  CHECK(cp.clusters[2] == std::vector<int>{10});
  CHECK(cp.clusters[3] == std::vector<int>{20});
  // shadows sit on the path itself
  CHECK(cp.shadows[1] == std::pair<int, int>{2, 3});
  CHECK(cp.shadows[2] == std::pair<int, int>{10, 10});

  auto all = build_clusters(s, 100);  // E above the diameter
  CHECK(all.clusters.size() == 1);

  // chaining oracle: same cluster iff E-chain exists, cross-cluster gaps >= E
  for (size_t i = 0; i < cp.clusters.size(); ++i)
    for (size_t j = i + 1; j < cp.clusters.size(); ++j)
      for (int p : cp.clusters[i])
        for (int q : cp.clusters[j]) CHECK(g.dist(p, q) >= 2);
}

TEST_CASE("cluster separation graph on P20 is the expected path") {
  HypGraph g = path_graph(20);
  EpsilonSetup s0 = build_setup(g, 0, 20, {}, 0);
  auto two = cluster_separation_graph(s0, 2, 1);
  CHECK(two.order == std::vector<int>{0, 1});
  CHECK(two.edge[0][1] == 1);

  EpsilonSetup s = build_setup(g, 0, 20, {2, 3, 10}, 2);
  auto sep = cluster_separation_graph(s, 2, 1);
  REQUIRE(sep.order.size() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) CHECK((bool)sep.edge[i][j] == (j == i + 1));
}

TEST_CASE("stable interval: Y empty gives a single edge component") {
  HypGraph g = path_graph(100);
  EpsilonSetup s = build_setup(g, 0, 100, {}, 1);  // default E=57 < d(a,b)
  StableInterval t = build_stable_interval(s);
  REQUIRE(t.items.size() == 3);
  CHECK(t.items[0].is_cluster);
  CHECK(t.items[0].len == 0);
  CHECK(!t.items[1].is_cluster);
  CHECK(t.items[1].len == 100);
  CHECK(t.items[2].len == 0);
  CHECK(t.total_length() == 100);
  CHECK(t.phi(0) == 0);
  CHECK(t.phi(100) == 100);
  CHECK(t.report.measurements.at("endpoint_drift") == 0);
  // E above the diameter: the whole setup is one cluster, a single item
  HypGraph g10 = path_graph(10);
  EpsilonSetup s10 = build_setup(g10, 0, 10, {}, 1);
  CHECK(build_stable_interval(s10).items.size() == 1);
}

TEST_CASE("stable interval on P20: component lengths 0,2,1,7,0,10,0") {
  HypGraph g = path_graph(20);
  EpsilonSetup s = build_setup(g, 0, 20, {2, 3, 10}, 2);
  StableInterval t = build_stable_interval(s, 2, 1);
  std::vector<int> lens;
  for (auto& it : t.items) lens.push_back(it.len);
  CHECK(lens == std::vector<int>{0, 2, 1, 7, 0, 10, 0});
  CHECK(t.total_length() == 20);
  CHECK(t.report.measurements.at("L0_additive_defect") == 0);
  CHECK(t.report.measurements.at("hausdorff_to_lambda") == 0);
}

TEST_CASE("branch cluster: mu spans the connector endpoints through the tree") {
  HypGraph g = path_graph(20);
  g.adj.emplace_back();
  ++g.n;
  g.add_edge(10, 21);
  g.delta = 0;
  EpsilonSetup s = build_setup(g, 0, 20, {9, 11, 21}, 3);
  StableInterval t = build_stable_interval(s, 3, 1);
  std::vector<int> lens;
  for (auto& it : t.items) lens.push_back(it.len);
  CHECK(lens == std::vector<int>{0, 9, 2, 9, 0});
  CHECK(t.items[2].path == std::vector<int>{9, 10, 11});  // hull in the tree
  CHECK(t.clusters_in_order[1] == std::vector<int>{9, 11, 21});
}

TEST_CASE("thickenings") {
  HypGraph g = path_graph(100);
  EpsilonSetup s = build_setup(g, 0, 100, {}, 1);
  StableInterval t = build_stable_interval(s);
  Thickening th = thicken(t, 1, 1);
  REQUIRE(th.edge_blocks.size() == 1);
  CHECK(th.edge_blocks[0] == std::pair<int, int>{1, 99});
  CHECK(!th.degenerate);

  HypGraph g20 = path_graph(20);
  EpsilonSetup s20 = build_setup(g20, 0, 20, {2, 3, 10}, 2);
  StableInterval t20 = build_stable_interval(s20, 2, 1);
  Thickening th20 = thicken(t20, 1, 2);
  // first trimmed edge is empty and its blocks merge; T_e is two blocks
  REQUIRE(th20.cluster_blocks.size() == 3);
  CHECK(th20.cluster_blocks[0] == std::pair<int, int>{0, 4});
  CHECK(th20.cluster_blocks[1] == std::pair<int, int>{9, 11});
  CHECK(th20.cluster_blocks[2] == std::pair<int, int>{19, 20});
  REQUIRE(th20.edge_blocks.size() == 2);
  CHECK(th20.edge_blocks[0] == std::pair<int, int>{4, 9});
  CHECK(th20.edge_blocks[1] == std::pair<int, int>{11, 19});

  // r2 at least the longest edge: everything merges, degenerate
  Thickening big = thicken(t20, 1, 10);
  CHECK(big.cluster_blocks.size() == 1);
  CHECK(big.degenerate);

  // merge step is idempotent: no surviving gap is within r2
  for (size_t i = 0; i + 1 < th20.cluster_blocks.size(); ++i)
    CHECK(th20.cluster_blocks[i + 1].first - th20.cluster_blocks[i].second > th20.r2);
}

TEST_CASE("seeded tree setups: full stable-interval regime") {
  std::mt19937_64 rng(42);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int spine = 250 + (int)(seed % 5) * 40;
    int eps = (seed % 2) ? 1 : 3;
    HypGraph g = caterpillar(seed, spine, 8, eps == 1 ? 1 : 1);
    // Y within eps/2 of the spine (= lambda in a tree)
    std::vector<int> Y;
    int ny = 2 + (int)(rng() % 12);
    for (int i = 0; i < ny; ++i) {
      int v = (int)(rng() % g.n);
      // branch vertices are only allowed when eps = 3 (they sit at distance 1)
      if (v > spine && eps == 1) v = (int)(rng() % (spine + 1));
      Y.push_back(v);
    }
    EpsilonSetup s = build_setup(g, 0, spine, Y, eps);
    int E = 56 * eps + 1;
    auto parts = build_clusters(s, E);
    // chaining oracle: cross-cluster distances at least E
    for (size_t i = 0; i < parts.clusters.size(); ++i)
      for (size_t j = i + 1; j < parts.clusters.size(); ++j)
        for (int p : parts.clusters[i])
          for (int q : parts.clusters[j]) CHECK(g.dist(p, q) >= E);
    // shadows disjoint (E > 5 eps)
    for (size_t i = 0; i + 1 < parts.shadows.size(); ++i)
      CHECK(parts.shadows[i].second < parts.shadows[i + 1].first);

    StableInterval t = build_stable_interval(s);
    CHECK(t.report.ok());
    CHECK(t.report.measurements.at("endpoint_drift") == 0);
    CHECK(t.report.measurements.at("cluster_close") <= 7 * eps);
    // phi is 1-Lipschitz with small additive defect in a tree
    CHECK(t.report.measurements.at("L0_additive_defect") <= 4 * eps);
    CHECK(t.report.measurements.at("hausdorff_to_lambda") <= s.eps_prime);
    // alternating structure, shared attachment vertices
    REQUIRE(t.items.size() % 2 == 1);
    for (size_t i = 0; i < t.items.size(); ++i) {
      CHECK(t.items[i].is_cluster == (i % 2 == 0));
      if (!t.items[i].is_cluster) CHECK(t.items[i].len >= 1);
      CHECK((int)t.items[i].path.size() == t.items[i].len + 1);
    }
    CHECK(t.phi(0) == 0);
    CHECK(t.phi(t.total_length()) == spine);

    Thickening th = thicken(t, 2, 3);
    int covered = 0;
    for (auto& bkk : th.cluster_blocks) covered += bkk.second - bkk.first;
    for (auto& e : th.edge_blocks) covered += e.second - e.first;
    CHECK(covered == t.total_length());
    for (size_t i = 0; i + 1 < th.cluster_blocks.size(); ++i)
      CHECK(th.cluster_blocks[i + 1].first - th.cluster_blocks[i].second > th.r2);
  }
}
