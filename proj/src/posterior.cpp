#include "ermfdr/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ermfdr/errors.hpp"
#include "ermfdr/kernels.hpp"

namespace ermfdr {

namespace {

// Divergence value of a posterior without re-validating the probability
// precondition (the build already certified normalization).
double divergence_of(const DiscreteModelSpace& space, const DivergenceSpec& spec,
                     std::span<const double> rn, ExecPolicy policy) {
  bool infinite = false;
  const double d =
      kernels::generator_sum(spec, rn, space.weights, policy, &infinite);
  if (infinite) {
    throw InfiniteDivergence("posterior density vanishes while f(0) is infinite");
  }
  return d;
}

double reference_expected_risk(const DiscreteModelSpace& space, ExecPolicy policy) {
  return kernels::weighted_sum(space.risks, space.weights, policy);
}

}  // namespace

GibbsPosterior build_posterior(const DiscreteModelSpace& space,
                               const DivergenceSpec& spec, double lambda,
                               double beta, ExecPolicy policy) {
  if (!(lambda > 0.0)) throw Error("regularization factor must be positive");
  GibbsPosterior posterior;
  posterior.spec = spec;
  posterior.lambda = lambda;
  posterior.beta = beta;
  posterior.rn.resize(space.size());

  kernels::DomainStatus status;
  kernels::fill_density(spec, lambda, beta, space.risks, posterior.rn, policy,
                        &status);
  if (!status.ok) {
    throw OutOfDomain(status.bad_atom,
                      "conjugate argument outside its open domain at atom " +
                          std::to_string(status.bad_atom));
  }
  for (std::size_t i = 0; i < posterior.rn.size(); ++i) {
    if (!(posterior.rn[i] > 0.0)) {
      throw PositivityViolated(i, "posterior density nonpositive at atom " +
                                      std::to_string(i));
    }
  }

  const double total =
      kernels::weighted_sum(posterior.rn, space.weights, policy);
  posterior.normalization_residual = std::abs(total - 1.0);
  if (posterior.normalization_residual > 1e-6) {
    throw StaleBeta("normalization residual " +
                    std::to_string(posterior.normalization_residual) +
                    "; beta is inconsistent with lambda");
  }

  posterior.weights.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    posterior.weights[i] = posterior.rn[i] * space.weights[i];
  }
  return posterior;
}

double primal_value(const DiscreteModelSpace& space,
                    const GibbsPosterior& posterior, ExecPolicy policy) {
  const double risk =
      kernels::weighted_sum(space.risks, posterior.rn, space.weights, policy);
  const double div = divergence_of(space, posterior.spec, posterior.rn, policy);
  return risk + posterior.lambda * div;
}

double dual_value(const DiscreteModelSpace& space, const DivergenceSpec& spec,
                  double lambda, double b, ExecPolicy policy) {
  if (!(lambda > 0.0)) throw Error("regularization factor must be positive");
  kernels::DomainStatus status;
  const double conj = kernels::conjugate_sum(spec, lambda, b, space.risks,
                                             space.weights, policy, &status);
  if (!status.ok) {
    throw OutOfDomain(status.bad_atom,
                      "conjugate argument outside its open domain at atom " +
                          std::to_string(status.bad_atom));
  }
  return lambda * conj + b;
}

double duality_gap(const DiscreteModelSpace& space, const DivergenceSpec& spec,
                   double lambda, const SolverConfig& cfg) {
  const NormalizationResult solved = solve_normalization(space, spec, lambda, cfg);
  const GibbsPosterior posterior =
      build_posterior(space, spec, lambda, solved.beta, cfg.policy);
  const double primal = primal_value(space, posterior, cfg.policy);
  const double dual_best = -dual_value(space, spec, lambda, solved.beta, cfg.policy);
  return primal - dual_best;
}

ObjectiveIdentityReport objective_identities(const DiscreteModelSpace& space,
                                             const DivergenceSpec& spec,
                                             double lambda,
                                             const SolverConfig& cfg) {
  const NormalizationResult solved = solve_normalization(space, spec, lambda, cfg);
  const double n_value = solved.beta;
  const GibbsPosterior posterior =
      build_posterior(space, spec, lambda, n_value, cfg.policy);

  ObjectiveIdentityReport report;

  const double risk_p =
      kernels::weighted_sum(space.risks, posterior.rn, space.weights, cfg.policy);
  const double div = divergence_of(space, spec, posterior.rn, cfg.policy);

  kernels::DomainStatus status;
  const double conj = kernels::conjugate_sum(spec, lambda, n_value, space.risks,
                                             space.weights, cfg.policy, &status);
  report.optimal_value_residual =
      risk_p + lambda * div + lambda * conj + n_value;

  // Reference-risk identity: every 1/g factor realizes dQ/dP per atom.
  const double risk_q = reference_expected_risk(space, cfg.policy);
  const double ratio_term =
      kernels::chunked_sum(space.size(), cfg.policy, [&](std::size_t i) {
        return spec.f(posterior.rn[i]) / posterior.rn[i] * space.weights[i];
      });
  const double conj_over_g = kernels::conjugate_over_density_sum(
      spec, lambda, n_value, space.risks, posterior.rn, space.weights,
      cfg.policy, &status);
  report.reference_risk_residual =
      risk_q + lambda * ratio_term + lambda * conj_over_g + n_value;

  if (spec.id == Divergence::kl && spec.canonical()) {
    report.has_kl_specialization = true;
    const double primal = risk_p + lambda * div;
    report.kl_cumulant_residual = primal + closed_form_beta_kl(space, lambda);
  }
  if (spec.id == Divergence::reverse_kl) {
    report.has_reverse_kl_specialization = true;
    // Shift to the relaxed normalization, for which R(P) = lambda - N holds.
    const double n_relaxed = n_value + lambda * (spec.fdot(1.0) + 1.0);
    report.reverse_kl_risk_residual = risk_p - (lambda - n_relaxed);
  }
  return report;
}

double risk_gap_residual(const DiscreteModelSpace& space,
                         const DivergenceSpec& spec, double lambda,
                         const SolverConfig& cfg) {
  if (spec.id != Divergence::kl && spec.id != Divergence::reverse_kl) {
    throw NotApplicable("risk-gap identity available for kl and reverse_kl only");
  }
  const NormalizationResult solved = solve_normalization(space, spec, lambda, cfg);
  const GibbsPosterior posterior =
      build_posterior(space, spec, lambda, solved.beta, cfg.policy);
  const double risk_q = reference_expected_risk(space, cfg.policy);
  const double risk_p =
      kernels::weighted_sum(space.risks, posterior.rn, space.weights, cfg.policy);
  const double gap = risk_q - risk_p;

  if (spec.id == Divergence::kl) {
    const double forward =
        kernels::chunked_sum(space.size(), cfg.policy, [&](std::size_t i) {
          return posterior.rn[i] * std::log(posterior.rn[i]) * space.weights[i];
        });
    const double backward =
        kernels::chunked_sum(space.size(), cfg.policy, [&](std::size_t i) {
          return -std::log(posterior.rn[i]) * space.weights[i];
        });
    return gap - lambda * (forward + backward);
  }
  const double inverse_excess =
      kernels::chunked_sum(space.size(), cfg.policy, [&](std::size_t i) {
        return (1.0 / posterior.rn[i] - 1.0) * space.weights[i];
      });
  return gap - lambda * inverse_excess;
}

JensenBoundReport jensen_bound(const DiscreteModelSpace& space,
                               const DivergenceSpec& spec, double lambda,
                               const SolverConfig& cfg) {
  const NormalizationResult solved = solve_normalization(space, spec, lambda, cfg);
  const GibbsPosterior posterior =
      build_posterior(space, spec, lambda, solved.beta, cfg.policy);

  JensenBoundReport report;
  report.optimal_value = primal_value(space, posterior, cfg.policy);
  const double risk_q = reference_expected_risk(space, cfg.policy);
  const double v = -(risk_q + solved.beta) / lambda;
  if (!spec.conjugate_domain().contains(v)) {
    report.applicable = false;
    return report;
  }
  report.bound = -lambda * spec.conjugate(v) - solved.beta;
  report.slack = report.bound - report.optimal_value;
  return report;
}

RiskMonotoneReport risk_monotone_in_lambda(const DiscreteModelSpace& space,
                                           const DivergenceSpec& spec,
                                           std::span<const double> lambdas,
                                           const SolverConfig& cfg) {
  RiskMonotoneReport report;
  const RiskSummary summary = summarize(space);
  report.delta_star = summary.delta_star;
  report.reference_risk = summary.r_q;
  report.risks.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const NormalizationResult solved =
        solve_normalization(space, spec, lambda, cfg);
    const GibbsPosterior posterior =
        build_posterior(space, spec, lambda, solved.beta, cfg.policy);
    report.risks.push_back(kernels::weighted_sum(space.risks, posterior.rn,
                                                 space.weights, cfg.policy));
  }
  for (std::size_t k = 0; k + 1 < report.risks.size(); ++k) {
    report.worst_chain_violation = std::max(
        report.worst_chain_violation, report.risks[k] - report.risks[k + 1]);
  }
  for (double r : report.risks) {
    report.worst_bound_violation =
        std::max({report.worst_bound_violation, report.delta_star - r,
                  r - report.reference_risk});
  }
  return report;
}

}  // namespace ermfdr
