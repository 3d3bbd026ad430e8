#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scube/report.hpp"

namespace scube {

// Walls are numbered 0..n-1. Half-space ids are 2*w + side with side in {0,1};
// the involution is h ^ 1. A vertex (ultrafilter) is a bitmask over walls,
// bit w = chosen side of wall w. Everything is capped at 32 walls which keeps
// half-space sets in a single uint64_t.
using Vertex = std::uint32_t;
using HsId = int;

constexpr int kMaxWalls = 32;
constexpr int kMaxEnumWalls = 20;  // 2^20 orientations is the enumeration cap

struct Pocset {
  int n = 0;  // number of walls
  // above[h] = bitmask over half-space ids g with h < g.
  std::vector<std::uint64_t> above;

  static HsId hs(int wall, int side) { return 2 * wall + side; }
  static HsId star(HsId h) { return h ^ 1; }
  static int wall_of(HsId h) { return h / 2; }
  static int side_of(HsId h) { return h & 1; }

  bool less(HsId a, HsId b) const { return (above[a] >> b) & 1; }
  bool transverse(int w1, int w2) const;

  // Half-space of wall w chosen by vertex v.
  HsId chosen(Vertex v, int w) const { return hs(w, (v >> w) & 1); }
  bool consistent(Vertex v) const;

  // Sub-pocset on the walls listed in `keep` (renumbered in the given order).
  Pocset restrict_to(const std::vector<int>& keep) const;
};

struct CubeComplex {
  Pocset p;
  std::vector<Vertex> verts;  // sorted ascending
  int dimension = 0;          // = width of p

  int index_of(Vertex v) const;      // -1 when absent
  bool has(Vertex v) const { return index_of(v) >= 0; }
  std::vector<std::pair<int, int>> edge_list() const;  // pairs of vertex indices
  // Vertices choosing half-space h.
  std::vector<Vertex> halfspace_vertices(HsId h) const;
};

struct VertexMap {
  // walls kept, in original numbering; image wall i corresponds to keep[i]
  std::vector<int> keep;
  Vertex apply(Vertex v) const;
};

struct IsomorphismResult {
  bool ok = false;
  std::string violation;                 // first violated pair when !ok
  std::vector<int> wall_map;             // A wall -> B wall
  std::vector<int> side_map;             // A wall -> xor bit applied to that wall
  std::vector<Vertex> vertex_images;     // per vertex of A (same order as verts)
};

Report validate_pocset(const Pocset& p);
int pocset_width(const Pocset& p);  // exact, branch and bound
CubeComplex dual_complex(const Pocset& p);

Vertex median(const CubeComplex& cc, Vertex a, Vertex b, Vertex c);
int distance_l1(const CubeComplex& cc, Vertex a, Vertex b);
int distance_linf(const CubeComplex& cc, Vertex a, Vertex b);

std::pair<CubeComplex, VertexMap> delete_hyperplanes(const CubeComplex& cc,
                                                     const std::vector<int>& walls);

// bij: half-space id of a -> half-space id of b, total on 2*a.p.n ids.
IsomorphismResult check_halfspace_isomorphism(const CubeComplex& a, const CubeComplex& b,
                                              const std::vector<int>& bij);

// Seeded random pocsets for tests and the CLI generator.
Pocset random_pocset(std::uint64_t seed, int n_walls);

}  // namespace scube
