#pragma once

#include <cstdint>
#include <string>

#include "scube/normal_paths.hpp"
#include "scube/toy_hhs.hpp"

namespace scube {

// Normal (Niblo-Reeves) path computed directly in the coordinates of Q: at
// each step, flip every separating factor wall whose b-side is minimal under
// inclusion of vertex sets. Cross-checked against the realized complex when
// the wall count fits the bitmask cap.
std::vector<std::vector<int>> q_nr_path(const QComplex& q,
                                        const std::vector<int>& from,
                                        const std::vector<int>& to);

// Distance between two consistent points, measured inside their own theta
// hull (the hull-graph metric the space X carries).
int pair_distance(const HHSInstance& inst, const Point& x, const Point& y);

// The cubical side of one endpoint pair: the collapsed system, the full
// Omega-hat evaluation table, and the measured model constant B0.
struct CubicalModel {
  GeneratedInstance in;  // instance plus the endpoints a, b
  CollapsedSystem cs;
  std::vector<Point> omega;        // per Q vertex
  std::vector<std::vector<int>> nr;  // NR path a-hat -> b-hat in Q coordinates
  int B0 = 0;
  Report report;

  int q_index(const std::vector<int>& t) const { return cs.q.index_of(t); }
};

CubicalModel build_cubical_model(const HHSInstance& inst, const Point& a,
                                 const Point& b);

// Gamma = Omega-hat of the NR path, with the measured quasi-geodesic and
// per-domain monotonicity constants attached.
struct BicombingPath {
  std::vector<std::vector<int>> q_path;
  std::vector<Point> gamma;
  int zeta = 0;  // quasi-geodesic constant of gamma in the hull metric
  Report report;
};

BicombingPath bicombing_path(const CubicalModel& model);

// Stable cubulation diagram for a perturbed pair (a,b) -> (a2,b2).
struct StableCubulationDiagram {
  CubicalModel m1, m2;            // over (a,b) and (a2,b2)
  std::vector<int> shared;        // global ids of the surviving domains
  TrimResult trim1, trim2;        // Delta_0 and Delta'_0
  CubicalIso iso;                 // I_0 : Q_0 -> Q'_0
  int S0 = 0;                     // constructed trimming constant
  int Sigma = 0;                  // measured middle-triangle defect
  int top_defect = 0, bottom_defect = 0;
  Report report;

  // Omega-hat_0 = Omega-hat of the section Xi; q0 is an index into trim1.qp.
  Point omega0(int q0) const;
  Point omega0p(int q0p) const;
};

StableCubulationDiagram build_stable_diagram(const HHSInstance& inst,
                                             const Point& a, const Point& b,
                                             const Point& a2, const Point& b2);

struct FellowTravelReport {
  StableCubulationDiagram diagram;
  std::vector<Point> gamma1, gamma2;  // constant-extended to equal length
  int sup = 0;                        // max_t d(gamma1(t), gamma2(t))
  int terms[5] = {0, 0, 0, 0, 0};     // the five chain contributions
  int B0 = 0;                         // folded constant, bound is 5 * B0
  Report report;
};

FellowTravelReport fellow_traveling(const HHSInstance& inst, const Point& a,
                                    const Point& b, const Point& a2,
                                    const Point& b2);

// Unit perturbation of (a,b) that keeps both interval systems admissible:
// moves one endpoint coordinate a step toward the interior.
void perturb_pair(const GeneratedInstance& g, std::uint64_t seed, Point& a2,
                  Point& b2);

// CLI dispatcher; fills out_json with the machine-readable report. Returns
// 0 on success, 1 on a failed check, 2 on usage errors.
int run_command(const std::vector<std::string>& args, std::string& out_json);

// Instance (de)serialization, schema {domains, trees, rho_sets, rho_maps,
// constants} plus an endpoints extension.
std::string instance_to_json_string(const GeneratedInstance& g);
GeneratedInstance instance_from_json_string(const std::string& text);

}  // namespace scube
