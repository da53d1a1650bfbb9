#pragma once

#include <vector>

#include "ermfdr/divergence.hpp"
#include "ermfdr/model_space.hpp"
#include "ermfdr/solver.hpp"

namespace ermfdr {

// Risk remapping under which regularizing with the source generator is
// indistinguishable from regularizing the remapped risks with the target
// generator:  r(t) = -lambda * gdot( fdot_inv(-(N + t)/lambda) ) - c.
struct RiskTransform {
  Divergence source;
  Divergence target;
  double lambda = 0.0;
  double source_normalization = 0.0;  // solved constant of the source problem
  double c_shift = 0.0;
  std::vector<double> transformed_risks;
};

RiskTransform transform_risks(const DiscreteModelSpace& space,
                              const DivergenceSpec& source,
                              const DivergenceSpec& target, double lambda,
                              double c_shift = 0.0, const SolverConfig& cfg = {});

struct EquivalenceReport {
  RiskTransform transform;
  double target_normalization = 0.0;   // solved on the transformed risks; equals c_shift
  double max_rn_discrepancy = 0.0;     // max_i |g_source_i - g_target_i|
  std::vector<double> source_rn;
  std::vector<double> target_rn;
};

// Solves both problems independently and compares the densities atom by atom.
// Throws TransformInfeasible when the target problem admits no normalization.
EquivalenceReport verify_equivalence(const DiscreteModelSpace& space,
                                     const DivergenceSpec& source,
                                     const DivergenceSpec& target, double lambda,
                                     double c_shift = 0.0,
                                     const SolverConfig& cfg = {});

}  // namespace ermfdr
