#pragma once

#include "scube/pocset.hpp"
#include "scube/report.hpp"

namespace scube {

// Niblo-Reeves path inside the hull complex of (a,b): vertices plus the wall
// set crossed at each step.
struct NormalPath {
  std::vector<Vertex> vertices;          // p_0 .. p_n
  std::vector<std::vector<int>> steps;   // walls flipped at step i
  int length() const { return (int)steps.size(); }
};

struct StableMovesReport {
  Report report;
  NormalPath before, after;
};

// Walls separating p from b whose b-side half-space is <-minimal among the
// separating ones.
std::vector<int> transitional_set(const CubeComplex& cc, Vertex p, Vertex b);

NormalPath nr_path(const CubeComplex& cc, Vertex a, Vertex b);

// Step index at which wall h is crossed travelling a -> b; equals the longest
// <-chain among b-oriented half-spaces strictly below h's.
int transition_index(const CubeComplex& cc, Vertex a, Vertex b, int h);

// Requires cc to be the hull complex of (a,b): every wall separates them.
StableMovesReport verify_stable_moves(const CubeComplex& cc, Vertex a, Vertex b, int h);

// Hull sub-complex spanned by the walls separating a,b, with the images of a,b.
struct HullComplex {
  CubeComplex cc;
  VertexMap restriction;
  Vertex a, b;
};
HullComplex hull_complex(const CubeComplex& cc, Vertex a, Vertex b);

}  // namespace scube
