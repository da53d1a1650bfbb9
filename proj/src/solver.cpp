#include "ermfdr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ermfdr/errors.hpp"
#include "ermfdr/kernels.hpp"

namespace ermfdr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Open interval of b values keeping every atom's conjugate argument
// -(b + L_i)/lambda strictly inside the conjugate domain.
struct BracketDomain {
  double lo;
  double hi;
};

BracketDomain admissible_interval(const DivergenceSpec& spec, double lambda,
                                  double risk_min, double risk_max) {
  const Interval dom = spec.conjugate_domain();
  BracketDomain b;
  b.lo = std::isfinite(dom.hi) ? -lambda * dom.hi - risk_min : -kInf;
  b.hi = std::isfinite(dom.lo) ? -lambda * dom.lo - risk_max : kInf;
  return b;
}

}  // namespace

double constraint_integral(const DiscreteModelSpace& space,
                           const DivergenceSpec& spec, double lambda, double b,
                           ExecPolicy policy) {
  if (!(lambda > 0.0)) throw Error("regularization factor must be positive");
  std::vector<double> density(space.size());
  kernels::DomainStatus status;
  kernels::fill_density(spec, lambda, b, space.risks, density, policy, &status);
  if (!status.ok) {
    throw OutOfDomain(status.bad_atom,
                      "conjugate argument outside its open domain at atom " +
                          std::to_string(status.bad_atom));
  }
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (!(density[i] > 0.0)) {
      throw PositivityViolated(i, "inverse derivative is nonpositive at atom " +
                                      std::to_string(i));
    }
  }
  return kernels::weighted_sum(density, space.weights, policy);
}

NormalizationResult solve_normalization(const DiscreteModelSpace& space,
                                        const DivergenceSpec& spec, double lambda,
                                        const SolverConfig& cfg) {
  if (!(lambda > 0.0)) throw Error("regularization factor must be positive");
  space.validate();
  const RiskSummary summary = summarize(space);

  NormalizationResult result;

  if (!summary.separable) {
    // Constant risk c: the solution is the reference measure itself, reached
    // at the unique b with fdot_inv(-(b + c)/lambda) = 1.
    const double c = summary.r_q;
    result.beta = -c - lambda * spec.fdot(1.0);
    kernels::DomainStatus status;
    const double integral =
        kernels::density_sum(spec, lambda, result.beta, space.risks,
                             space.weights, cfg.policy, &status);
    result.residual = status.ok ? std::abs(integral - 1.0) : kInf;
    result.bracket_low = result.bracket_high = result.beta;
    result.feasible = result.residual <= cfg.tolerance;
    result.degenerate = true;
    return result;
  }

  const double risk_min = summary.delta_star;
  const double risk_max =
      *std::max_element(space.risks.begin(), space.risks.end());
  const BracketDomain domain =
      admissible_interval(spec, lambda, risk_min, risk_max);
  if (!(domain.lo < domain.hi)) {
    throw Infeasible(lambda, "no admissible normalization bracket exists");
  }

  auto eval = [&](double b) {
    kernels::DomainStatus status;
    const double v = kernels::density_sum(spec, lambda, b, space.risks,
                                          space.weights, cfg.policy, &status);
    return status.ok ? v : kInf;  // out of domain only at probes beyond the interval edge
  };

  const double width = std::max(cfg.initial_bracket_width,
                                cfg.initial_bracket_width * lambda);

  // Upper bracket end: move toward larger b (smaller I) until I < 1.
  double b_hi;
  {
    int iter = 0;
    if (domain.hi == kInf) {
      b_hi = std::isfinite(domain.lo) ? std::max(lambda, domain.lo + width)
                                      : lambda;
      double step = width;
      while (eval(b_hi) >= 1.0) {
        if (++iter > cfg.max_iterations) {
          throw Infeasible(lambda, "constraint integral stays above one");
        }
        b_hi += step;
        step *= cfg.bracket_growth;
      }
    } else {
      double gap = std::isfinite(domain.lo) ? (domain.hi - domain.lo)
                                            : std::max(width, 0.5 * std::abs(domain.hi) + width);
      bool found = false;
      while (iter++ < cfg.max_iterations) {
        gap /= cfg.bracket_growth;
        b_hi = domain.hi - gap;
        if (!(b_hi > domain.lo)) continue;
        if (eval(b_hi) < 1.0) {
          found = true;
          break;
        }
      }
      if (!found) {
        // The integral's infimum over the admissible interval is >= 1; no
        // normalization constant exists for this regularization factor.
        throw Infeasible(lambda, "constraint integral stays above one up to the domain edge");
      }
    }
  }

  // Lower bracket end: move toward smaller b (larger I) until I > 1.
  double b_lo;
  {
    int iter = 0;
    if (domain.lo == -kInf) {
      b_lo = std::min(-risk_min, b_hi - width);
      double step = width;
      while (eval(b_lo) <= 1.0) {
        if (++iter > cfg.max_iterations) {
          throw Infeasible(lambda, "constraint integral stays below one");
        }
        b_lo -= step;
        step *= cfg.bracket_growth;
      }
    } else {
      double gap = b_hi - domain.lo;
      bool found = false;
      while (iter++ < cfg.max_iterations) {
        gap /= cfg.bracket_growth;
        b_lo = domain.lo + gap;
        if (eval(b_lo) > 1.0) {
          found = true;
          break;
        }
      }
      if (!found) {
        throw Infeasible(lambda, "constraint integral stays below one up to the domain edge");
      }
    }
  }

  result.bracket_low = b_lo;
  result.bracket_high = b_hi;

  // Bisection on the strictly decreasing I.
  double b = 0.5 * (b_lo + b_hi);
  double integral = eval(b);
  int iterations = 0;
  while (std::abs(integral - 1.0) > cfg.tolerance &&
         iterations < cfg.max_iterations) {
    if (integral > 1.0) {
      b_lo = b;
    } else {
      b_hi = b;
    }
    const double next = 0.5 * (b_lo + b_hi);
    if (next == b) break;  // bracket exhausted at double resolution
    b = next;
    integral = eval(b);
    ++iterations;
  }

  // Newton polish: dI/db = -(1/lambda) sum q_i / fddot(g_i).
  std::vector<double> density(space.size());
  for (int k = 0; k < 3; ++k) {
    kernels::DomainStatus status;
    kernels::fill_density(spec, lambda, b, space.risks, density, cfg.policy,
                          &status);
    if (!status.ok) break;
    const double slope =
        -kernels::curvature_sum(spec, density, space.weights, cfg.policy) /
        lambda;
    if (!(slope < 0.0) || !std::isfinite(slope)) break;
    const double next = b - (integral - 1.0) / slope;
    if (!(next > result.bracket_low) || !(next < result.bracket_high)) break;
    const double next_integral = eval(next);
    if (std::abs(next_integral - 1.0) >= std::abs(integral - 1.0)) break;
    b = next;
    integral = next_integral;
  }

  result.beta = b;
  result.residual = std::abs(integral - 1.0);
  result.iterations = iterations;
  result.feasible = result.residual <= cfg.tolerance;
  return result;
}

double closed_form_beta_kl(const DiscreteModelSpace& space, double lambda) {
  if (!(lambda > 0.0)) throw Error("regularization factor must be positive");
  const std::size_t n = space.size();
  double m = -kInf;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, -space.risks[i] / lambda);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += space.weights[i] * std::exp(-space.risks[i] / lambda - m);
  }
  return lambda * (m + std::log(s));
}

double closed_form_beta_chi2(const DiscreteModelSpace& space, double lambda) {
  if (!(lambda > 0.0)) throw Error("regularization factor must be positive");
  const double r_q =
      kernels::weighted_sum(space.risks, space.weights, ExecPolicy::serial);
  const double risk_max =
      *std::max_element(space.risks.begin(), space.risks.end());
  if (!(lambda + r_q > risk_max)) {
    throw Infeasible(lambda,
                     "quadratic-generator density would be nonpositive on the "
                     "worst atom");
  }
  return -(lambda + r_q);
}

double lambda_star_estimate(const DiscreteModelSpace& space,
                            const DivergenceSpec& spec, const SolverConfig& cfg) {
  if (spec.strictly_positive_inverse()) return 0.0;

  auto feasible = [&](double lambda) {
    try {
      return solve_normalization(space, spec, lambda, cfg).feasible;
    } catch (const Infeasible&) {
      return false;
    }
  };

  constexpr double kCap = 1e9;
  double hi = 1.0;
  while (!feasible(hi)) {
    hi *= 4.0;
    if (hi > kCap) throw EmptyFeasibleSet("no feasible regularization factor below cap");
  }
  double lo = 0.0;
  while (hi - lo > 1e-6 * std::max(hi, 1e-12)) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > 0.0)) break;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ermfdr
