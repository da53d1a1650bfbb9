#pragma once

#include "ermfdr/divergence.hpp"
#include "ermfdr/model_space.hpp"

namespace ermfdr {

struct SolverConfig {
  double tolerance = 1e-10;      // on |I(b) - 1|
  int max_iterations = 200;      // bisection / bracket-expansion cap
  double bracket_growth = 2.0;   // geometric expansion factor
  double fd_step = 1e-4;         // relative step for finite-difference checks
  double initial_bracket_width = 1.0;
  ExecPolicy policy = ExecPolicy::parallel;
};

struct NormalizationResult {
  double beta = 0.0;
  double residual = 0.0;  // |I(beta) - 1|
  int iterations = 0;
  double bracket_low = 0.0;   // verified initial bracket
  double bracket_high = 0.0;
  bool feasible = false;
  bool degenerate = false;  // nonseparable space: solution collapses to the reference
};

// I(b) = sum_i fdot_inv(-(b + L_i)/lambda) q_i, strictly decreasing in b.
// Throws OutOfDomain when some atom's argument leaves the conjugate domain and
// PositivityViolated when the inverse derivative fails to be positive.
double constraint_integral(const DiscreteModelSpace& space,
                           const DivergenceSpec& spec, double lambda, double b,
                           ExecPolicy policy = ExecPolicy::parallel);

// Root of I(b) = 1 by bracketed bisection with a short Newton polish.
// Nonseparable spaces short-circuit to the constant-density solution.
// Throws Infeasible when no in-domain bracket exists.
NormalizationResult solve_normalization(const DiscreteModelSpace& space,
                                        const DivergenceSpec& spec, double lambda,
                                        const SolverConfig& cfg = {});

// lambda * log( sum_i exp(-L_i/lambda) q_i ), evaluated with a max shift.
double closed_form_beta_kl(const DiscreteModelSpace& space, double lambda);

// -(lambda + R(Q)) for the raw quadratic generator; requires
// lambda + R(Q) > max_i L_i, otherwise the density would go nonpositive
// somewhere and the result throws Infeasible.
double closed_form_beta_chi2(const DiscreteModelSpace& space, double lambda);

// Infimum of the feasible set of regularization factors. Returns 0 for
// generators whose inverse derivative is strictly positive; otherwise bisects
// on feasibility (the feasible set is an interval) to relative tolerance 1e-6.
double lambda_star_estimate(const DiscreteModelSpace& space,
                            const DivergenceSpec& spec,
                            const SolverConfig& cfg = {});

}  // namespace ermfdr
