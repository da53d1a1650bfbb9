#pragma once

#include <vector>

#include "ermfdr/model_space.hpp"
#include "ermfdr/rng.hpp"

namespace ermfdr::testing {

// Risks (0, 1) on two equally weighted atoms; the worked example threaded
// through most solver and posterior checks.
inline DiscreteModelSpace two_atom_space() {
  return DiscreteModelSpace::make({0.0, 1.0}, {0.5, 0.5});
}

inline DiscreteModelSpace random_space(std::uint64_t seed, int atoms,
                                       double risk_hi = 10.0,
                                       bool random_weights = false) {
  Rng rng(seed);
  std::vector<double> risks(atoms);
  for (double& r : risks) r = rng.uniform(0.0, risk_hi);
  std::vector<double> weights;
  if (random_weights) {
    weights.resize(atoms);
    double total = 0.0;
    for (double& w : weights) {
      w = rng.uniform(0.01, 1.0);
      total += w;
    }
    for (double& w : weights) w /= total;
  }
  return DiscreteModelSpace::make(std::move(risks), std::move(weights));
}

}  // namespace ermfdr::testing
