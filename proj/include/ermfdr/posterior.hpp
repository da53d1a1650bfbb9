#pragma once

#include <span>
#include <vector>

#include "ermfdr/divergence.hpp"
#include "ermfdr/model_space.hpp"
#include "ermfdr/solver.hpp"

namespace ermfdr {

// Solution measure for a given (lambda, beta): per-atom density ratio
// g_i = fdot_inv(-(beta + L_i)/lambda) and posterior masses p_i = g_i q_i.
struct GibbsPosterior {
  DivergenceSpec spec;
  double lambda = 0.0;
  double beta = 0.0;
  std::vector<double> rn;       // dP/dQ per atom, strictly positive
  std::vector<double> weights;  // posterior masses
  double normalization_residual = 0.0;
};

// Throws StaleBeta when |sum g_i q_i - 1| > 1e-6 (beta inconsistent with lambda).
GibbsPosterior build_posterior(const DiscreteModelSpace& space,
                               const DivergenceSpec& spec, double lambda,
                               double beta,
                               ExecPolicy policy = ExecPolicy::parallel);

// R(P) + lambda * D_f(P||Q) at the posterior.
double primal_value(const DiscreteModelSpace& space, const GibbsPosterior& posterior,
                    ExecPolicy policy = ExecPolicy::parallel);

// Dual objective G(b) = lambda * sum f*(-(b + L_i)/lambda) q_i + b.
double dual_value(const DiscreteModelSpace& space, const DivergenceSpec& spec,
                  double lambda, double b,
                  ExecPolicy policy = ExecPolicy::parallel);

// primal - (-lambda * sum f*(-(beta* + L)/lambda) q - beta*), signed; exactly
// zero in exact arithmetic for every catalog generator.
double duality_gap(const DiscreteModelSpace& space, const DivergenceSpec& spec,
                   double lambda, const SolverConfig& cfg = {});

// Signed residuals of the two exact value decompositions tied to the solved
// normalization constant, plus the closed-form specializations available for
// the entropy-type generators.
struct ObjectiveIdentityReport {
  double optimal_value_residual;   // R(P) + l*D + l*sum f*(v) q + N
  double reference_risk_residual;  // R(Q) + l*sum (f(g)/g) q + l*sum (f*(v)/g) q + N
  bool has_kl_specialization = false;
  double kl_cumulant_residual = 0.0;  // primal + lambda * log sum exp(-L/lambda) q
  bool has_reverse_kl_specialization = false;
  double reverse_kl_risk_residual = 0.0;  // R(P) - (lambda - N_relaxed)
};

ObjectiveIdentityReport objective_identities(const DiscreteModelSpace& space,
                                             const DivergenceSpec& spec,
                                             double lambda,
                                             const SolverConfig& cfg = {});

// Closed-form expressions for the risk drop R(Q) - R(P). Supported for the
// entropy and reverse-entropy generators only; others throw NotApplicable.
double risk_gap_residual(const DiscreteModelSpace& space,
                         const DivergenceSpec& spec, double lambda,
                         const SolverConfig& cfg = {});

// Jensen upper bound on the optimal value; slack >= 0, zero only when the
// posterior collapses to the reference measure.
struct JensenBoundReport {
  bool applicable = true;
  double optimal_value = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // bound - optimal_value
};

JensenBoundReport jensen_bound(const DiscreteModelSpace& space,
                               const DivergenceSpec& spec, double lambda,
                               const SolverConfig& cfg = {});

// Expected posterior risk along an ascending lambda grid; the chain
// delta_star <= R(P_l1) <= ... <= R(Q) must hold.
struct RiskMonotoneReport {
  double delta_star = 0.0;
  double reference_risk = 0.0;
  std::vector<double> risks;        // one per lambda
  double worst_chain_violation = 0.0;  // max of consecutive decreases
  double worst_bound_violation = 0.0;  // escape below delta_star / above R(Q)
};

RiskMonotoneReport risk_monotone_in_lambda(const DiscreteModelSpace& space,
                                           const DivergenceSpec& spec,
                                           std::span<const double> lambdas,
                                           const SolverConfig& cfg = {});

}  // namespace ermfdr
