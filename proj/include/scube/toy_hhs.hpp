#pragma once

#include <cstdint>
#include <string>

#include "scube/hfi.hpp"
#include "scube/hyperbolic_graph.hpp"
#include "scube/report.hpp"

namespace scube {

// A point of the synthetic space: one vertex coordinate per domain.
using Point = std::vector<int>;

// Configured constants plus a bucket for measured ones. E is deliberately
// 2*eps_prime+1 rather than the 56*eps+1 hyperbolic-graph default: trees have
// delta = 0 and the larger radius would chain the marked points of any small
// interval into one cluster.
struct ConstantLedger {
  int E_S = 1;        // HHS constant of the instance
  int theta = 1;      // consistency threshold for points of X
  int eps = 1;        // setup admissibility (2d(y,lambda) < eps)
  int eps_prime = 2;  // eps + 8*delta + 1 with delta = 0
  int E = 5;          // cluster chaining radius, 2*eps_prime + 1
  int K0 = 2;
  int K = 3;
  int r1 = 1, r2 = 1;
  int N0 = 8;
  Report measured;
};

// Finite synthetic HHS. Domain 0 is the unique maximal element S. Relations
// use the HFI codes; rel[u][v] describes v as seen from u.
struct HHSInstance {
  int n = 0;
  std::vector<HypGraph> tree;
  std::vector<std::vector<char>> rel;
  // rho_set[u][v] subset of tree[u]; present iff v nests properly in u or
  // v is transverse to u. Diameter at most E_S.
  std::vector<std::vector<std::vector<int>>> rho_set;
  // rho_map[u][v]: tree[u] -> tree[v]; present iff v nests properly in u.
  std::vector<std::vector<std::vector<int>>> rho_map;
  ConstantLedger c;

  void init(int domains);
  int d_set(int u, int x, int v) const;  // d_{tree[u]}(x, rho_set[u][v])
  bool consistent(const Point& x, int theta) const;
};

// Axioms, rho control, BGIA (exhaustive over tree geodesics), coloring.
Report validate_instance(const HHSInstance& inst);

// theta-hull of a pair: theta-consistent tuples with every coordinate within
// theta of the tree geodesic between the projections of a and b. Edges join
// tuples at coordinate-distance sum 1.
struct Hull {
  const HHSInstance* inst = nullptr;
  int theta = 0;
  Point a, b;
  std::vector<std::vector<int>> coord_hull;  // allowed vertices per domain
  std::vector<Point> pts;                    // sorted
  mutable std::vector<std::vector<int>> dist_cache;

  int index_of(const Point& p) const;  // -1 if absent
  const std::vector<int>& dists_from(int i) const;
  int dist(int i, int j) const { return dists_from(i)[j]; }
  int coord_dist(int i, int j) const;  // sum of tree distances
};

Hull build_hull(const HHSInstance& inst, const Point& a, const Point& b, int theta);

// Coordinatewise closest point onto the hull coordinates, then snap to the
// nearest hull tuple (the gate retraction).
Point gate(const Hull& h, const Point& x);

// {U : d_U(a,b) >= K}, ascending ids, plus covering / bounding-container /
// passing-up accounting.
struct RelevantDomains {
  std::vector<int> doms;
  Report report;
};
RelevantDomains relevant_domains(const HHSInstance& inst, const Point& a,
                                 const Point& b, int K);

// Stable interval per relevant domain with interval projections.
struct IntervalSystem {
  const HHSInstance* inst = nullptr;
  Point a, b;
  int K = 0;
  std::vector<int> doms;  // relevant domain ids, ascending
  std::vector<StableInterval> T;
  // dset[i][j]: abstract coordinate range of delta^{Vj}_{Ui} in T[i] when
  // U_j nests in or is transverse to U_i; (-1,-1) otherwise.
  std::vector<std::vector<std::pair<int, int>>> dset;
  std::vector<std::vector<int>> ditem;  // owning item index, -1 if n/a
  // dmap[i][j]: interval projection T_i -> T_j when U_j nests in U_i.
  std::vector<std::vector<std::vector<int>>> dmap;
  Report report;

  int idx(int dom) const;
};

IntervalSystem build_interval_system(const HHSInstance& inst, const Point& a,
                                     const Point& b, int K);

// Thickened + collapsed system with the induced HFI, its Q, and the hull used
// by the Psi/Omega maps.
struct CollapsedSystem {
  IntervalSystem sys;
  int r1 = 1, r2 = 1;
  std::vector<Thickening> thick;       // parallel to sys.doms
  std::vector<std::vector<int>> qmap;  // T coordinate -> collapsed coordinate
  std::vector<std::vector<char>> is_collapsed;  // per hat coordinate
  std::vector<int> hat_len;
  HFI h;       // domains in sys.doms order
  QComplex q;  // 0-consistent set
  Hull hull;
  Report report;

  int rep_lo(int i, int hat) const;  // smallest preimage of hat under qmap[i]
  int rep_hi(int i, int hat) const;
};

CollapsedSystem collapse_system(const IntervalSystem& sys, int r1, int r2);

// Coordinatewise closest point onto phi(T_U), pulled back and collapsed.
std::vector<int> project_psi_hat(const CollapsedSystem& cs, const Point& x);

// Cluster honing: lift a Q vertex back into prod T_U.
std::vector<int> hone_omega(const CollapsedSystem& cs, const std::vector<int>& qt);

// hone_omega pushed through phi, padded with pi(a) on irrelevant domains and
// gated into the hull.
Point lift_omega_hat(const CollapsedSystem& cs, const std::vector<int>& qt);

// Exhaustive Psi-image-in-Q check plus the M0 coarse-surjectivity audit.
Report audit_maps(const CollapsedSystem& cs);

// Tabulates d_X, sum of [d_U]_K, sum of collapsed interval distances and d_Q
// over hull pairs; best multiplicative (x100) and additive constants.
Report audit_metrics(const CollapsedSystem& cs);

struct GeneratedInstance {
  HHSInstance inst;
  Point a, b;
};

// One-vertex top with two orthogonal path domains of lengths 5 and 7.
GeneratedInstance product_example();

// Seeded generator: nesting forest of depth <= 2 with at most one orthogonal
// pair per parent, path-with-a-leaf trees, anchors spaced >= E apart, and
// component-constant rho maps. Rejects draws failing validate_instance.
GeneratedInstance generate_instance(std::uint64_t seed);

}  // namespace scube
