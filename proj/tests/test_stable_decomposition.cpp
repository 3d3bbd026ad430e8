#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "graph_helpers.hpp"
#include "scube/stable_decomposition.hpp"

using namespace scube;
using scube::testing::caterpillar;

namespace {

using Seg = std::pair<int, int>;

EpsilonSetup p20_setup(HypGraph& g) {
  g = path_graph(20);
  return build_setup(g, 0, 20, {2, 3, 10}, 2);
}

}  // namespace

TEST_CASE("split case: z = 15 splits the long edge of P20") {
  HypGraph g;
  EpsilonSetup s = p20_setup(g);
  StablePair p = add_cluster_point(s, 15, 2, 1);
  REQUIRE(p.report.ok());
  // both intervals keep the two a-side edges; the split edge 10..20 keeps a
  // prefix up to the shadow of z and a suffix, one point is given up for
  // disjointness
  CHECK(p.s1.stable == std::vector<Seg>{{0, 2}, {3, 10}, {10, 15}, {16, 20}});
  CHECK(p.s2.stable == std::vector<Seg>{{0, 2}, {3, 10}, {10, 15}, {16, 20}});
  CHECK(p.report.measurements.at("nonidentical_pairs") == 0);
  CHECK(p.report.measurements.at("unstable_components") == 2);
  CHECK(p.report.measurements.at("max_unstable_diam") == 1);
  CHECK(p.L == 2);
  // pointwise identical on every stable pair
  for (size_t i = 0; i < p.s1.stable.size(); ++i)
    for (int t = 0; t <= p.s1.stable[i].second - p.s1.stable[i].first; ++t)
      CHECK(p.s1.T.phi(p.s1.stable[i].first + t) ==
            p.s2.T.phi(p.s2.stable[i].first + t));
}

TEST_CASE("affected case: z = 4 merges into the {2,3} cluster") {
  HypGraph g;
  EpsilonSetup s = p20_setup(g);
  StablePair p = add_cluster_point(s, 4, 2, 1);
  REQUIRE(p.report.ok());
  // outer-left edge kept whole, outer-right edge loses one point at the
  // affected end, the far edge is untouched
  CHECK(p.s1.stable == std::vector<Seg>{{0, 2}, {4, 10}, {10, 20}});
  CHECK(p.s2.stable == std::vector<Seg>{{0, 2}, {4, 10}, {10, 20}});
  CHECK(p.report.measurements.at("nonidentical_pairs") == 0);
  CHECK(p.report.measurements.at("unstable_components") == 1);
  CHECK(p.L == 1);
  // the new cluster really is {2,3,4}
  CHECK(p.s2.T.clusters_in_order[1] == std::vector<int>{2, 3, 4});
}

TEST_CASE("z already a cluster point: identity decomposition") {
  HypGraph g;
  EpsilonSetup s = p20_setup(g);
  StablePair p = add_cluster_point(s, 10, 2, 1);
  REQUIRE(p.report.ok());
  CHECK(p.L == 0);
  CHECK(p.s1.stable == p.s2.stable);
  CHECK(p.report.measurements.at("unstable_components") == 0);
}

TEST_CASE("strict mode rejects points off the geodesic") {
  HypGraph g = path_graph(20);
  g.adj.emplace_back();
  ++g.n;
  g.add_edge(15, 21);
  g.delta = 0;
  EpsilonSetup s = build_setup(g, 0, 20, {2, 3, 10}, 2);
  CHECK_THROWS_WITH_AS(add_cluster_point(s, 21, 2, 1),
                       doctest::Contains("PointTooFar"), SpecError);
  CHECK_NOTHROW(add_cluster_point(s, 21, 2, 1, /*max_dist=*/1));
}

TEST_CASE("validator rejects broken pairs") {
  HypGraph g;
  EpsilonSetup s = p20_setup(g);
  StablePair p = add_cluster_point(s, 4, 2, 1);
  SUBCASE("length mismatch") {
    p.s2.stable[1].second -= 1;
    Report r = validate_pair(p);
    CHECK(!r.ok());
    CHECK(r.first_failure().find("pair-isometries") == 0);
  }
  SUBCASE("segment inside cluster material") {
    p.s1.stable[0] = {2, 3};  // the {2,3} cluster item
    p.s2.stable[0] = {2, 3};
    Report r = validate_pair(p);
    CHECK(!r.ok());
  }
  SUBCASE("count mismatch") {
    p.s2.stable.pop_back();
    Report r = validate_pair(p);
    CHECK(!r.ok());
  }
}

TEST_CASE("composing with the identity changes nothing") {
  HypGraph g;
  EpsilonSetup s = p20_setup(g);
  StablePair p = add_cluster_point(s, 15, 2, 1);
  StablePair id = identity_pair(build_stable_interval(s, 2, 1), s.Y);
  StablePair c = refine_and_compose(id, p);
  REQUIRE(c.report.ok());
  CHECK(c.s1.stable == p.s1.stable);
  CHECK(c.s2.stable == p.s2.stable);
  CHECK(c.L == p.L);
}

TEST_CASE("two adds compose within the 4 L1 L2 bound") {
  HypGraph g;
  EpsilonSetup s = p20_setup(g);
  StablePair p1 = add_cluster_point(s, 15, 2, 1);
  EpsilonSetup s2 = s;
  s2.Y = {2, 3, 10, 15};
  StablePair p2 = add_cluster_point(s2, 4, 2, 1);
  StablePair c = refine_and_compose(p1, p2);
  REQUIRE(c.report.ok());
  CHECK(c.Y0 == std::vector<int>{2, 3, 10});
  CHECK(c.s1.stable == std::vector<Seg>{{0, 2}, {4, 10}, {10, 15}, {16, 20}});
  CHECK(c.s2.stable == std::vector<Seg>{{0, 2}, {4, 10}, {10, 15}, {16, 20}});
  CHECK(c.L <= 4 * std::max(1, p1.L) * std::max(1, p2.L));
  // associativity of the induced beta labels: composing in the other
  // grouping gives the same outer stable sets
  EpsilonSetup s3 = s;
  s3.Y = {2, 3, 4, 10, 15};
  StablePair p3 = add_cluster_point(s3, 16, 2, 1);
  StablePair left = refine_and_compose(refine_and_compose(p1, p2), p3);
  StablePair right = refine_and_compose(p1, refine_and_compose(p2, p3));
  CHECK(left.s1.stable == right.s1.stable);
  CHECK(left.s2.stable == right.s2.stable);
}

TEST_CASE("endpoint perturbation on a long path") {
  HypGraph g = path_graph(400);
  EpsilonSetup s = build_setup(g, 0, 400, {150, 280}, 2);
  StablePair p = perturb_endpoint(s, 0, 1);
  REQUIRE(p.report.ok());
  CHECK(p.s1.T.setup.a == 0);
  CHECK(p.s2.T.setup.a == 1);
  CHECK(p.s2.T.phi(0) == 1);
  CHECK(p.L <= 2);
  // moving b instead
  StablePair q = perturb_endpoint(s, 1, 399);
  REQUIRE(q.report.ok());
  CHECK(q.s2.T.setup.b == 399);
  // no move is the identity
  StablePair r = perturb_endpoint(s, 0, 0);
  CHECK(r.L == 0);
  // too far
  CHECK_THROWS_WITH_AS(perturb_endpoint(s, 0, 5),
                       doctest::Contains("PointTooFar"), SpecError);
}

TEST_CASE("endpoint perturbation across a branch vertex") {
  HypGraph g = path_graph(400);
  g.adj.emplace_back();
  ++g.n;
  g.add_edge(0, 401);
  g.delta = 0;
  EpsilonSetup s = build_setup(g, 0, 400, {150, 280}, 2);
  StablePair p = perturb_endpoint(s, 0, 401);  // off the old geodesic
  REQUIRE(p.report.ok());
  CHECK(p.s2.T.phi(0) == 401);
}

TEST_CASE("full move sequence between admissible setups") {
  HypGraph g = path_graph(400);
  EpsilonSetup s = build_setup(g, 0, 400, {150, 280}, 2);
  EpsilonSetup sp = build_setup(g, 1, 399, {150, 281}, 2);
  BuildResult br = build_stable_pair(s, sp, 2, 3, 4);
  CHECK(br.moves == 4);  // one add, two endpoint moves, one remove
  REQUIRE(br.plain.report.ok());
  REQUIRE(br.thick.report.ok());
  CHECK(br.plain.s1.T.setup.a == 0);
  CHECK(br.plain.s2.T.setup.a == 1);
  CHECK(br.plain.s2.T.setup.b == 399);
  CHECK(br.plain.s2.T.setup.Y == std::vector<int>{150, 281});
  CHECK(br.plain.Y0 == std::vector<int>{150});
  // thickened stable segments refine the plain ones
  for (auto& seg : br.thick.s1.stable) {
    bool inside = false;
    for (auto& big : br.plain.s1.stable)
      if (big.first <= seg.first && seg.second <= big.second) inside = true;
    CHECK(inside);
  }
  auto [c1, c2, phi] = collapse_to_isometry(br.plain);
  CHECK(c1.length == c2.length);
  CHECK(phi.length == c1.length);
}

TEST_CASE("move sequence: identical setups and disjoint Y sets") {
  HypGraph g = path_graph(400);
  EpsilonSetup s = build_setup(g, 0, 400, {150}, 2);
  BuildResult same = build_stable_pair(s, s, 2, 3, 2);
  CHECK(same.moves == 0);
  CHECK(same.plain.L == 0);

  EpsilonSetup sp = build_setup(g, 0, 400, {250}, 2);
  BuildResult br = build_stable_pair(s, sp, 2, 3, 3);
  CHECK(br.moves == 2);
  REQUIRE(br.plain.report.ok());
  CHECK(br.plain.Y0.empty());
}

TEST_CASE("move sequence with a branch cluster point") {
  HypGraph g = path_graph(400);
  g.adj.emplace_back();
  ++g.n;
  g.add_edge(200, 401);
  g.delta = 0;
  EpsilonSetup s = build_setup(g, 0, 400, {401}, 3);
  EpsilonSetup sp = build_setup(g, 0, 400, {200}, 3);
  BuildResult br = build_stable_pair(s, sp, 2, 3, 3);
  CHECK(br.moves == 2);
  REQUIRE(br.plain.report.ok());
}

TEST_CASE("inadmissible setups are rejected") {
  HypGraph g = path_graph(400);
  EpsilonSetup s = build_setup(g, 0, 400, {150}, 2);
  EpsilonSetup far = build_setup(g, 5, 400, {150}, 2);
  CHECK_THROWS_WITH_AS(build_stable_pair(s, far, 2, 3, 4),
                       doctest::Contains("NotAdmissible"), SpecError);
  EpsilonSetup sp = build_setup(g, 0, 400, {250}, 2);
  CHECK_THROWS_WITH_AS(build_stable_pair(s, sp, 2, 3, 2),  // |symdiff| = 2 >= N
                       doctest::Contains("NotAdmissible"), SpecError);
}

TEST_CASE("collapse to an interval isometry") {
  HypGraph g;
  EpsilonSetup s = p20_setup(g);
  StablePair p = add_cluster_point(s, 4, 2, 1);
  auto [c1, c2, phi] = collapse_to_isometry(p);
  CHECK(c1.length == 18);
  CHECK(c2.length == 18);
  CHECK(c1.comp_pos == std::vector<int>{0, 2, 8, 18});
  CHECK(c2.comp_pos == std::vector<int>{0, 2, 8, 18});
  CHECK(phi.length == 18);
  // delta is monotone and collapses exactly the unstable material
  for (int t = 0; t < 20; ++t) CHECK(c1.delta[t] <= c1.delta[t + 1]);
  CHECK(c1.delta[0] == 0);
  CHECK(c1.delta[20] == 18);
  CHECK(c1.delta[3] == c1.delta[4] - 0);  // [3,4] is unstable on side 1
  CHECK(c1.delta[4] == 2);
}

TEST_CASE("seeded trees: admissible pairs end to end") {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    int spine = 250 + (int)(seed % 5) * 20;
    int eps = (seed % 2) ? 1 : 3;
    HypGraph g = caterpillar(seed, spine, 6, 1);
    auto pick = [&] { return 20 + (int)(rng() % (spine - 40)); };
    std::vector<int> Y{pick(), pick()};
    std::sort(Y.begin(), Y.end());
    Y.erase(std::unique(Y.begin(), Y.end()), Y.end());
    std::vector<int> Yp = Y;
    Yp.push_back(pick());  // one added point
    std::sort(Yp.begin(), Yp.end());
    Yp.erase(std::unique(Yp.begin(), Yp.end()), Yp.end());
    int a2 = (int)(rng() % (eps + 1));
    int b2 = spine - (int)(rng() % (eps + 1));
    EpsilonSetup s = build_setup(g, 0, spine, Y, eps);
    EpsilonSetup sp = build_setup(g, a2, b2, Yp, eps);
    int symdiff = 0;
    for (int y : Yp)
      if (std::find(Y.begin(), Y.end(), y) == Y.end()) ++symdiff;

    BuildResult br = build_stable_pair(s, sp, 2, 3, symdiff + 1);
    CHECK(br.moves <= symdiff + 2);
    CHECK(br.plain.report.ok());
    CHECK(br.thick.report.ok());
    // every stable pair is pointwise L-close
    for (size_t i = 0; i < br.plain.s1.stable.size(); ++i) {
      auto& a = br.plain.s1.stable[i];
      auto& b = br.plain.s2.stable[i];
      REQUIRE(a.second - a.first == b.second - b.first);
      for (int t = 0; t <= a.second - a.first; ++t)
        CHECK(g.dist(br.plain.s1.T.phi(a.first + t),
                     br.plain.s2.T.phi(b.first + t)) < std::max(1, br.plain.L));
    }
    auto [c1, c2, phi] = collapse_to_isometry(br.plain);
    CHECK(c1.length == c2.length);
    for (size_t t = 0; t + 1 < c1.delta.size(); ++t)
      CHECK(c1.delta[t] <= c1.delta[t + 1]);
  }
}
