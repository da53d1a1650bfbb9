#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ermfdr/divergence.hpp"

namespace ermfdr {

enum class ExecPolicy { serial, parallel };

// Weighted atoms representing the reference measure together with the
// empirical risk of every atom. Coordinates are optional; the solver only
// touches weights and risks.
struct DiscreteModelSpace {
  std::vector<double> atoms;   // flattened coordinates, dim per atom; may be empty
  int dim = 0;
  std::vector<double> weights;  // strictly positive, sum to 1
  std::vector<double> risks;    // nonnegative unless transformed_risks
  bool transformed_risks = false;  // set for risk vectors produced by a transform

  std::size_t size() const { return risks.size(); }
  void validate() const;  // throws Error on a broken invariant

  // weights empty -> uniform.
  static DiscreteModelSpace make(std::vector<double> risks,
                                 std::vector<double> weights = {});
};

struct RiskSummary {
  double delta_star;    // minimal risk carrying positive mass
  double r_q;           // expected risk under the reference measure
  bool separable;       // risk takes at least two distinct values
  std::vector<std::size_t> argmin_set;  // atoms attaining delta_star
};

// Absolute spread below which a risk function counts as nonseparable.
inline constexpr double kSeparabilityTol = 1e-12;

RiskSummary summarize(const DiscreteModelSpace& space);

// R(P) = sum_i L_i rn_i q_i for a density ratio rn (dP/dQ per atom).
// Requires sum_i rn_i q_i = 1 within 1e-8.
double expected_risk(const DiscreteModelSpace& space, std::span<const double> rn,
                     ExecPolicy policy = ExecPolicy::parallel);

// D_f(P||Q) = sum_i f(rn_i) q_i with f(0) taken as the right limit.
double f_divergence(const DiscreteModelSpace& space, std::span<const double> rn,
                    const DivergenceSpec& spec,
                    ExecPolicy policy = ExecPolicy::parallel);

// Relative entropy between two density ratios over the same reference:
// sum_i rn_num_i log(rn_num_i / rn_den_i) q_i, with 0 log 0 = 0.
double kl_divergence(const DiscreteModelSpace& space,
                     std::span<const double> rn_num,
                     std::span<const double> rn_den,
                     ExecPolicy policy = ExecPolicy::parallel);

}  // namespace ermfdr
