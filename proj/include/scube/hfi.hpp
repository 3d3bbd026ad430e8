#pragma once

#include <cstdint>

#include "scube/pocset.hpp"
#include "scube/report.hpp"

namespace scube {

// Domain relations. rel[u][v] describes v as seen from u.
constexpr char kRelNone = 0;      // u == v
constexpr char kRelNested = 1;    // u is nested in v
constexpr char kRelContains = 2;  // v is nested in u
constexpr char kRelOrth = 3;
constexpr char kRelTrans = 4;

// Hierarchical family of intervals. Interval T_u is the path 0..len[u] with
// marked points a at 0 and b at len[u]. For v nested in u or transverse to u,
// cluster[u][v] is the cluster point of v inside T_u. For v nested in u, the
// projection T_u -> T_v is the step function forced by BGI: everything left
// of the cluster point maps to 0, everything right of it to len[v], and the
// cluster point itself to midval[u][v].
struct HFI {
  int n = 0;
  std::vector<int> len;
  std::vector<std::vector<char>> rel;
  std::vector<std::vector<int>> cluster;  // -1 when not applicable
  std::vector<std::vector<int>> midval;   // -1 when not applicable

  void init(int domains);
  bool nested(int u, int v) const { return rel[u][v] == kRelNested; }
  int proj(int u, int v, int t) const;  // v nested in u, t in T_u
  int height(int u) const;              // nesting height, minimal = 0
  bool consistent(const std::vector<int>& x) const;  // 0-consistency
};

Report validate_hfi(const HFI& h);

struct QComplex {
  HFI h;
  std::vector<std::vector<int>> verts;  // sorted tuples
  int idx_a = -1, idx_b = -1;           // all-0 and all-len tuples
  std::vector<int> wall_off;            // factor edge (u,t) <-> wall wall_off[u]+t
  int n_walls = 0;

  int index_of(const std::vector<int>& t) const;
  int dist(int i, int j) const;  // l1 distance between vertices
  Vertex mask(const std::vector<int>& t) const;
  // Realized wallspace over the factor edges; requires n_walls <= kMaxWalls.
  CubeComplex realize() const;
};

// Enumerates the 0-consistent set with pruning; when the full product is
// small the plain brute-force filter is run as an oracle and asserted equal.
QComplex build_q_complex(const HFI& h);

std::vector<int> q_median(const QComplex& q, const std::vector<int>& p,
                          const std::vector<int>& r, const std::vector<int>& s);

struct TrimSegment {
  int u = 0, lo = 0, hi = 0;
};

struct TrimmingSetup {
  int B = 0;
  std::vector<TrimSegment> segs;
};

struct TrimResult {
  HFI trimmed;                // the surviving domains only
  std::vector<int> live;      // original ids of the surviving domains
  std::vector<int> dropped;   // fully collapsed domains
  std::vector<int> dropped_diam;
  std::vector<std::vector<int>> delta_map;  // per original domain, t -> t'
  QComplex q, qp;
  std::vector<int> delta;          // q vertex index -> qp vertex index
  std::vector<std::vector<int>> xi;  // qp vertex -> tuple over the original domains
  int deleted_hyperplanes = 0;
  int fallbacks = 0;  // section choices that needed the exhaustive search
  Report report;
};

TrimResult trim_hfi(const HFI& h, const TrimmingSetup& setup);

struct CubicalIso {
  std::vector<int> vmap;  // q vertex index -> q' vertex index
  IsomorphismResult cert;
  Report report;
};

// maps[u] is a vertex map T_u -> T'_u; must be a simplicial isometry fixing
// the marked points and the cluster data, and equivariant for the nested
// projections.
CubicalIso induce_isomorphism(const HFI& ha, const HFI& hb,
                              const std::vector<std::vector<int>>& maps);

// True iff the u-coordinate along the path is monotone. The path must be a
// combinatorial geodesic in q.
bool projection_is_geodesic(const QComplex& q, const std::vector<int>& path, int u);

// Two-level random HFI: domain 0 is the top, the rest nest directly in it
// with orthogonal/transverse sibling relations derived coherently.
HFI random_hfi(std::uint64_t seed, int max_domains, int max_len);

}  // namespace scube
