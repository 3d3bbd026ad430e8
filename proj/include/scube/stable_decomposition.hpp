#pragma once

#include <tuple>

#include "scube/hyperbolic_graph.hpp"

namespace scube {

// One side of a stable decomposition pair. Everything lives in the abstract
// global coordinates of the stable interval [0, total_length]. cluster_blocks
// cover the cluster material (the cluster items themselves, or the thickening
// blocks for a thickened decomposition); stable segments are subsegments of
// the complementary edge material.
struct DecompSide {
  StableInterval T;
  std::vector<std::pair<int, int>> cluster_blocks;
  std::vector<std::pair<int, int>> stable;  // sorted, disjoint, length >= 1
  bool thickened = false;
};

struct StablePair {
  DecompSide s1, s2;  // alpha pairs s1.stable[i] with s2.stable[i]
  std::vector<int> Y0;
  std::vector<std::string> tags;  // per stable pair, diagnostics
  int L = 0;                      // smallest L passing validate_pair
  Report report;
};

// Components of [0,L] minus the union of segs; closed pieces, single points
// allowed (these become the collapse vertices).
std::vector<std::pair<int, int>> complement_components(
    int L, const std::vector<std::pair<int, int>>& segs);

// Edge material of a side: complement of the cluster blocks.
std::vector<std::pair<int, int>> edge_material(const DecompSide& s);

DecompSide plain_side(const StableInterval& T);

// Identity pair: every edge component fully stable, paired with itself.
StablePair identity_pair(const StableInterval& T, std::vector<int> Y0);

StablePair reverse_pair(const StablePair& p);

// Checks items (a)-(g) of the stable-decomposition definition and fills p.L
// with the smallest passing constant; all checks exact.
Report validate_pair(StablePair& p);

// Add one cluster point z to the setup (split or affected case). max_dist < 0
// demands the strict 2 d(z,lambda) < eps; otherwise d <= max_dist is allowed
// (used by the endpoint-perturbation chain).
StablePair add_cluster_point(const EpsilonSetup& s, int z, int E, int eps_prime,
                             int max_dist = -1);
StablePair add_cluster_point(const EpsilonSetup& s, int z, int max_dist = -1);

// Intersect the middle decompositions, pull back through the pair isometries,
// compose alpha/beta. Asserts the 4*L1*L2 bound and the refinement witnesses.
StablePair refine_and_compose(const StablePair& p12, const StablePair& p23);

// Six-setup endpoint move; which = 0 perturbs a, which = 1 perturbs b.
// E / eps_prime override the 56*eps+1 / setup defaults when positive.
StablePair perturb_endpoint(const EpsilonSetup& s, int which, int new_pt,
                            int E = -1, int eps_prime = -1);

// Thickened variant: intersect stable segments with T_e of the (r1,r2)
// thickening, then re-run the equal-length surgery. Result stable sets are
// contained in the plain ones.
StablePair thicken_pair(const StablePair& p, int r1, int r2);

struct BuildResult {
  StablePair plain;
  StablePair thick;
  int moves = 0;
};

// Full move sequence for two admissible setups: adds of Y'-Y, two endpoint
// moves, removes of Y-Y'. E / eps_prime override the defaults when positive.
BuildResult build_stable_pair(const EpsilonSetup& s, const EpsilonSetup& sp,
                              int r1, int r2, int N, int E = -1,
                              int eps_prime = -1);

struct CollapsedInterval {
  int length = 0;
  std::vector<int> comp_pos;  // collapsed coordinate of each complement comp
  std::vector<int> delta;     // global coordinate -> collapsed coordinate
};

struct IntervalIsometry {
  int length = 0;
  std::vector<int> comp_map;  // complement component identification
};

std::tuple<CollapsedInterval, CollapsedInterval, IntervalIsometry>
collapse_to_isometry(const StablePair& p);

}  // namespace scube
