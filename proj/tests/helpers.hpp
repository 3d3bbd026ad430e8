#pragma once

#include <random>

#include "scube/normal_paths.hpp"
#include "scube/pocset.hpp"

namespace scube::testing {

// Pocset whose dual is a two-point hull: a = all-zeros, b = all-ones.
// Built from a random partial order on the walls ("crossed before").
inline Pocset random_hull_pocset(std::uint64_t seed, int n_walls) {
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dull);
  Pocset p;
  p.n = n_walls;
  p.above.assign(2 * n_walls, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<bool>> before(n_walls, std::vector<bool>(n_walls, false));
  for (int i = 0; i < n_walls; ++i)
    for (int j = i + 1; j < n_walls; ++j)
      if (u(rng) < 0.35) before[i][j] = true;
  // transitive closure
  for (int k = 0; k < n_walls; ++k)
    for (int i = 0; i < n_walls; ++i)
      for (int j = 0; j < n_walls; ++j)
        if (before[i][k] && before[k][j]) before[i][j] = true;
  for (int i = 0; i < n_walls; ++i)
    for (int j = 0; j < n_walls; ++j)
      if (before[i][j]) {
        // wall i crossed before wall j: b-side(j) < b-side(i), a-side(i) < a-side(j)
        p.above[Pocset::hs(j, 1)] |= 1ull << Pocset::hs(i, 1);
        p.above[Pocset::hs(i, 0)] |= 1ull << Pocset::hs(j, 0);
      }
  return p;
}

inline CubeComplex grid_complex(int nx, int ny) {
  // product of an nx-chain and an ny-chain of walls
  Pocset p;
  p.n = nx + ny;
  p.above.assign(2 * p.n, 0);
  auto chain = [&](int base, int len) {
    for (int i = 0; i < len; ++i)
      for (int j = i + 1; j < len; ++j) {
        p.above[Pocset::hs(base + j, 1)] |= 1ull << Pocset::hs(base + i, 1);
        p.above[Pocset::hs(base + i, 0)] |= 1ull << Pocset::hs(base + j, 0);
      }
  };
  chain(0, nx);
  chain(nx, ny);
  return dual_complex(p);
}

// Brute-force median via interval intersection: I(a,b) = vertices on l1
// geodesics between a,b.
inline std::vector<Vertex> interval(const CubeComplex& cc, Vertex a, Vertex b) {
  std::vector<Vertex> out;
  for (Vertex v : cc.verts)
    if (distance_l1(cc, a, v) + distance_l1(cc, v, b) == distance_l1(cc, a, b))
      out.push_back(v);
  return out;
}

}  // namespace scube::testing
