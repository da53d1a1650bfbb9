#include "ermfdr/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "ermfdr/errors.hpp"
#include "ermfdr/posterior.hpp"

namespace ermfdr {

RiskTransform transform_risks(const DiscreteModelSpace& space,
                              const DivergenceSpec& source,
                              const DivergenceSpec& target, double lambda,
                              double c_shift, const SolverConfig& cfg) {
  const NormalizationResult solved =
      solve_normalization(space, source, lambda, cfg);

  RiskTransform transform;
  transform.source = source.id;
  transform.target = target.id;
  transform.lambda = lambda;
  transform.source_normalization = solved.beta;
  transform.c_shift = c_shift;
  transform.transformed_risks.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const double v = -(solved.beta + space.risks[i]) / lambda;
    const double u = source.fdot_inv(v);
    transform.transformed_risks[i] = -lambda * target.fdot(u) - c_shift;
  }
  return transform;
}

EquivalenceReport verify_equivalence(const DiscreteModelSpace& space,
                                     const DivergenceSpec& source,
                                     const DivergenceSpec& target, double lambda,
                                     double c_shift, const SolverConfig& cfg) {
  EquivalenceReport report;
  report.transform = transform_risks(space, source, target, lambda, c_shift, cfg);

  const GibbsPosterior source_posterior = build_posterior(
      space, source, lambda, report.transform.source_normalization, cfg.policy);
  report.source_rn = source_posterior.rn;

  DiscreteModelSpace remapped = space;
  remapped.risks = report.transform.transformed_risks;
  remapped.transformed_risks = true;  // the remap may produce negative values

  NormalizationResult target_solved;
  try {
    target_solved = solve_normalization(remapped, target, lambda, cfg);
  } catch (const Infeasible& e) {
    throw TransformInfeasible(
        std::string("target problem admits no normalization constant: ") +
        e.what());
  }
  report.target_normalization = target_solved.beta;

  const GibbsPosterior target_posterior = build_posterior(
      remapped, target, lambda, target_solved.beta, cfg.policy);
  report.target_rn = target_posterior.rn;

  for (std::size_t i = 0; i < space.size(); ++i) {
    report.max_rn_discrepancy =
        std::max(report.max_rn_discrepancy,
                 std::abs(report.source_rn[i] - report.target_rn[i]));
  }
  return report;
}

}  // namespace ermfdr
