#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "scube/pipeline.hpp"

using namespace scube;

TEST_CASE("q_nr_path on the product grid matches the realized oracle") {
  GeneratedInstance g = product_example();
  CubicalModel md = build_cubical_model(g.inst, g.a, g.b);
  REQUIRE(md.report.ok());
  const QComplex& q = md.cs.q;
  CHECK(q.verts.size() == 24);  // 4 x 6 grid
  // the oracle cross-check inside q_nr_path already ran; shape checks here
  CHECK(md.nr.size() == 6);  // 5 diagonal steps
  CHECK(md.nr.front() == q.verts[q.idx_a]);
  CHECK(md.nr.back() == q.verts[q.idx_b]);
  // NR in a product of paths is the diagonal staircase
  std::vector<std::vector<int>> want = {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {3, 4},
                                        {3, 5}};
  // coordinates may be (len 3, len 5) in either domain order
  int u3 = md.cs.hat_len[0] == 3 ? 0 : 1;
  for (size_t i = 0; i < md.nr.size(); ++i) {
    int lo = std::min(md.nr[i][u3], md.nr[i][1 - u3]);
    int hi = std::max(md.nr[i][u3], md.nr[i][1 - u3]);
    CHECK(lo == std::min<int>(i, 3));
    CHECK(hi == std::min<int>(i, 5));
  }
  (void)want;
}

TEST_CASE("q_nr_path rejects tuples outside Q") {
  GeneratedInstance g = product_example();
  CubicalModel md = build_cubical_model(g.inst, g.a, g.b);
  CHECK_THROWS_WITH_AS(q_nr_path(md.cs.q, {9, 9}, {0, 0}), "NotInQ: q_nr_path endpoint",
                       SpecError);
}

TEST_CASE("one-vertex model when the endpoints coincide") {
  GeneratedInstance g = product_example();
  CubicalModel md = build_cubical_model(g.inst, g.a, g.a);
  REQUIRE(md.report.ok());
  CHECK(md.cs.q.verts.size() == 1);
  CHECK(md.nr.size() == 1);
  CHECK(md.omega.size() == 1);
  CHECK(md.omega[0] == g.a);
  CHECK(md.B0 >= 1);
}

TEST_CASE("product model invariants") {
  GeneratedInstance g = product_example();
  CubicalModel md = build_cubical_model(g.inst, g.a, g.b);
  REQUIRE(md.report.ok());
  CHECK(md.omega.size() == 24);
  // Omega-hat endpoints land inside the r1-collapsed endpoint clusters
  CHECK(md.omega[md.cs.q.idx_a] == Point{0, 0, 0});
  CHECK(md.omega[md.cs.q.idx_b] == Point{0, 4, 6});
  // the collapse contracts 12 hull steps onto 8 grid steps, so the measured
  // constants are 2
  CHECK(md.report.measurements.at("dimension") == 2);
  CHECK(md.report.measurements.at("qi_constant") == 2);
  CHECK(md.report.measurements.at("zeta") == 2);
  CHECK(md.B0 == 2);
}

TEST_CASE("generated models pass the lqc-pair invariants") {
  for (std::uint64_t seed : {7ull, 1ull, 2ull, 3ull}) {
    CAPTURE(seed);
    GeneratedInstance g = generate_instance(seed);
    CubicalModel md = build_cubical_model(g.inst, g.a, g.b);
    REQUIRE_MESSAGE(md.report.ok(), md.report.first_failure());
    CHECK(md.B0 >= 1);
    CHECK((int)md.nr.size() - 1 <=
          md.cs.q.dist(md.cs.q.idx_a, md.cs.q.idx_b));
  }
}

TEST_CASE("bicombing path on the product") {
  GeneratedInstance g = product_example();
  CubicalModel md = build_cubical_model(g.inst, g.a, g.b);
  BicombingPath bp = bicombing_path(md);
  REQUIRE_MESSAGE(bp.report.ok(), bp.report.first_failure());
  CHECK(bp.gamma.size() == 6);  // 5 steps
  CHECK(bp.gamma.front() == g.a);  // anchored endpoints
  CHECK(bp.gamma.back() == g.b);
  CHECK(bp.zeta == 2);
  // staircase: every coordinate nondecreasing toward b
  for (size_t i = 0; i + 1 < bp.gamma.size(); ++i)
    for (size_t u = 0; u < bp.gamma[i].size(); ++u)
      CHECK(bp.gamma[i][u] <= bp.gamma[i + 1][u]);
}

TEST_CASE("constant path when a = b") {
  GeneratedInstance g = product_example();
  CubicalModel md = build_cubical_model(g.inst, g.b, g.b);
  BicombingPath bp = bicombing_path(md);
  REQUIRE(bp.report.ok());
  CHECK(bp.gamma.size() == 1);
  CHECK(bp.gamma[0] == g.b);
}

TEST_CASE("identity diagram: trivial trims, identity isomorphism, Sigma 0") {
  GeneratedInstance g = product_example();
  StableCubulationDiagram dg =
      build_stable_diagram(g.inst, g.a, g.b, g.a, g.b);
  REQUIRE_MESSAGE(dg.report.ok(), dg.report.first_failure());
  CHECK(dg.trim1.deleted_hyperplanes == 0);
  CHECK(dg.trim2.deleted_hyperplanes == 0);
  CHECK(dg.Sigma == 0);
  CHECK(dg.top_defect == 0);
  CHECK(dg.bottom_defect == 0);
  for (size_t v = 0; v < dg.iso.vmap.size(); ++v)
    CHECK(dg.iso.vmap[v] == (int)v);
  CHECK(dg.report.measurements.at("n_involved") == 0);
  CHECK(dg.report.measurements.at("n_symdiff") == 0);
}

TEST_CASE("diagram rejects non-perturbations") {
  GeneratedInstance g = product_example();
  Point far = g.a;
  far[1] += 2;  // two steps on one coordinate
  CHECK_THROWS_AS(build_stable_diagram(g.inst, g.a, g.b, far, g.b), SpecError);
}

TEST_CASE("product diagram under a unit endpoint move") {
  GeneratedInstance g = product_example();
  Point a2 = g.a;
  a2[1] += 1;  // a = (., 0, 0) -> (., 1, 0)
  REQUIRE(g.inst.consistent(a2, g.inst.c.theta));
  StableCubulationDiagram dg = build_stable_diagram(g.inst, g.a, g.b, a2, g.b);
  REQUIRE_MESSAGE(dg.report.ok(), dg.report.first_failure());
  CHECK(dg.trim1.deleted_hyperplanes <= dg.S0 * dg.S0);
  CHECK(dg.trim2.deleted_hyperplanes <= dg.S0 * dg.S0);
  CHECK(dg.top_defect <= dg.S0);
  CHECK(dg.bottom_defect <= dg.S0);
  // Xi is a genuine section
  for (size_t v0 = 0; v0 < dg.trim1.qp.verts.size(); ++v0)
    CHECK(dg.trim1.delta[dg.m1.cs.q.index_of(dg.trim1.xi[v0])] == (int)v0);
}

TEST_CASE("fellow traveling is zero on identical endpoints") {
  GeneratedInstance g = product_example();
  FellowTravelReport ft = fellow_traveling(g.inst, g.a, g.b, g.a, g.b);
  REQUIRE_MESSAGE(ft.report.ok(), ft.report.first_failure());
  CHECK(ft.sup == 0);
  for (int k = 0; k < 5; ++k) CHECK(ft.terms[k] == 0);
}

TEST_CASE("fellow traveling on the product perturbation") {
  GeneratedInstance g = product_example();
  Point a2 = g.a;
  a2[1] += 1;
  FellowTravelReport ft = fellow_traveling(g.inst, g.a, g.b, a2, g.b);
  REQUIRE_MESSAGE(ft.report.ok(), ft.report.first_failure());
  CHECK(ft.sup <= 5 * ft.B0);
  CHECK(ft.sup >= 1);  // the paths really are distinct
}

TEST_CASE("perturb_pair produces admissible unit moves") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    CAPTURE(seed);
    GeneratedInstance g = generate_instance(seed);
    Point a2, b2;
    perturb_pair(g, seed * 31 + 1, a2, b2);
    int da = 0, db = 0;
    for (int u = 0; u < g.inst.n; ++u) {
      da += g.inst.tree[u].dist(g.a[u], a2[u]);
      db += g.inst.tree[u].dist(g.b[u], b2[u]);
    }
    CHECK(da + db <= 1);
    CHECK(g.inst.consistent(a2, g.inst.c.theta));
    CHECK(g.inst.consistent(b2, g.inst.c.theta));
  }
}

TEST_CASE("end-to-end diagrams over generated instances") {
  int nontrivial = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    GeneratedInstance g = generate_instance(seed);
    Point a2, b2;
    perturb_pair(g, seed, a2, b2);
    if (a2 != g.a || b2 != g.b) ++nontrivial;
    FellowTravelReport ft = fellow_traveling(g.inst, g.a, g.b, a2, b2);
    REQUIRE_MESSAGE(ft.report.ok(), ft.report.first_failure());
    REQUIRE_MESSAGE(ft.diagram.report.ok(), ft.diagram.report.first_failure());
    CHECK(ft.sup <= 5 * ft.B0);
    CHECK(ft.diagram.trim1.deleted_hyperplanes <=
          ft.diagram.S0 * ft.diagram.S0);
  }
  CHECK(nontrivial >= 8);  // the perturbations are not all the identity
}
