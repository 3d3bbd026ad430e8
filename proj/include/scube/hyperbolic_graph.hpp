#pragma once

#include <utility>
#include <vector>

#include "scube/report.hpp"

namespace scube {

// Finite connected graph with unit-length edges. Distances are exact integers,
// filled in lazily one BFS source at a time.
struct HypGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;
  int delta = -1;  // 4-point hyperbolicity constant; -1 = not yet computed

  mutable std::vector<std::vector<int>> dist_cache;

  explicit HypGraph(int verts = 0) : n(verts), adj(verts) {}
  void add_edge(int u, int v);
  const std::vector<int>& dists_from(int s) const;
  int dist(int u, int v) const { return dists_from(u)[v]; }
  bool connected() const;
  bool is_tree() const;
};

HypGraph path_graph(int n);   // vertices 0..n, n edges
HypGraph cycle_graph(int n);  // vertices 0..n-1

// Max 4-point defect over all quadruples, halved and rounded up. Trees short
// circuit to 0.
int compute_delta(const HypGraph& g);

// Deterministic geodesic selection: BFS from the lexicographically smaller
// endpoint set, ties broken by smallest vertex id. between(A,B) runs from a
// point of A to a point of B and is symmetric as a set.
struct GeodesicChooser {
  const HypGraph* g;
  std::vector<int> between(const std::vector<int>& A, const std::vector<int>& B) const;
  std::vector<int> between(int u, int v) const;
};

struct EpsilonSetup {
  const HypGraph* g = nullptr;
  int a = 0, b = 0;
  std::vector<int> Y;
  int eps = 0;
  int delta = 0;
  int eps_prime = 0;          // eps + 8*delta + 1 by default
  std::vector<int> lambda;    // the chosen geodesic λ(a,b)
};

// Validates d(y, λ(a,b)) < eps/2 for all y (exact integer check 2d < eps).
// Throws SpecError("PointTooFar") otherwise.
EpsilonSetup build_setup(const HypGraph& g, int a, int b, std::vector<int> Y, int eps);

struct ClusterPartition {
  int E = 0;
  std::vector<std::vector<int>> clusters;          // sorted vertex lists
  std::vector<std::pair<int, int>> shadows;        // index range on λ(a,b)
};

// E-chaining on Y ∪ {a,b}; clusters listed in shadow order when shadows are
// disjoint (always sorted by shadow start).
ClusterPartition build_clusters(const EpsilonSetup& s, int E);

struct ClusterSepGraph {
  ClusterPartition parts;
  std::vector<std::vector<char>> edge;
  std::vector<int> order;  // cluster indices from the a-end to the b-end
};

// Edge iff no third cluster 2*eps_prime-separates the pair. Asserts the graph
// is an interval ordered like the shadows; throws SpecError("NotAnInterval").
ClusterSepGraph cluster_separation_graph(const EpsilonSetup& s, int E, int eps_prime);

struct StableItem {
  bool is_cluster = false;
  int len = 0;
  std::vector<int> path;  // len+1 graph vertices
};

struct StableInterval {
  EpsilonSetup setup;
  int E = 0;
  // alternating cluster,edge,cluster,...,cluster; consecutive items share
  // their attachment vertex
  std::vector<StableItem> items;
  std::vector<std::vector<int>> clusters_in_order;
  Report report;  // measured constants: L0 additive defect, Hausdorff dist, ...

  int total_length() const;
  std::vector<int> offsets() const;  // start coordinate of each item
  int phi(int t) const;              // graph vertex at abstract coordinate t
};

// Module defaults E = 56*eps + 1 and the setup's eps_prime.
StableInterval build_stable_interval(const EpsilonSetup& s);
StableInterval build_stable_interval(const EpsilonSetup& s, int E, int eps_prime);

struct Thickening {
  int r1 = 0, r2 = 0;
  std::vector<std::pair<int, int>> cluster_blocks;  // abstract coordinate ranges
  std::vector<std::pair<int, int>> edge_blocks;     // complement components
  bool degenerate = false;                          // 𝕋_e empty
};

Thickening thicken(const StableInterval& t, int r1, int r2);

}  // namespace scube
