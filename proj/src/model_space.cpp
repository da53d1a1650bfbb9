#include "ermfdr/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ermfdr/errors.hpp"
#include "ermfdr/kernels.hpp"

namespace ermfdr {

namespace {

// Neumaier-compensated sum; weight validation must not drown in rounding.
double compensated_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  return s + c;
}

void require_probability(const DiscreteModelSpace& space,
                         std::span<const double> rn) {
  if (rn.size() != space.size()) {
    throw NotAProbability("density ratio length differs from atom count");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < rn.size(); ++i) {
    if (!(rn[i] >= 0.0)) {
      throw NotAProbability("density ratio has a negative entry at atom " +
                            std::to_string(i));
    }
    s += rn[i] * space.weights[i];
  }
  if (std::abs(s - 1.0) > 1e-8) {
    throw NotAProbability("density ratio integrates to " + std::to_string(s) +
                          ", not 1");
  }
}

}  // namespace

void DiscreteModelSpace::validate() const {
  const std::size_t n = risks.size();
  if (n == 0) throw Error("model space must contain at least one atom");
  if (weights.size() != n) throw Error("weights/risks length mismatch");
  if (!atoms.empty()) {
    if (dim <= 0 || atoms.size() != n * static_cast<std::size_t>(dim)) {
      throw Error("atom coordinate block does not match dim * count");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0)) {
      throw Error("weight must be strictly positive at atom " + std::to_string(i));
    }
    if (!std::isfinite(risks[i])) {
      throw Error("risk must be finite at atom " + std::to_string(i));
    }
    if (!transformed_risks && risks[i] < 0.0) {
      throw Error("risk must be nonnegative at atom " + std::to_string(i));
    }
  }
  if (std::abs(compensated_sum(weights) - 1.0) > 1e-12) {
    throw Error("weights must sum to 1");
  }
}

DiscreteModelSpace DiscreteModelSpace::make(std::vector<double> risks,
                                            std::vector<double> weights) {
  DiscreteModelSpace space;
  space.risks = std::move(risks);
  if (weights.empty()) {
    space.weights.assign(space.risks.size(),
                         1.0 / static_cast<double>(space.risks.size()));
  } else {
    space.weights = std::move(weights);
  }
  space.validate();
  return space;
}

RiskSummary summarize(const DiscreteModelSpace& space) {
  RiskSummary out;
  const auto [lo_it, hi_it] =
      std::minmax_element(space.risks.begin(), space.risks.end());
  out.delta_star = *lo_it;
  out.separable = (*hi_it - *lo_it) > kSeparabilityTol;
  out.r_q = kernels::weighted_sum(space.risks, space.weights, ExecPolicy::serial);
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space.risks[i] <= out.delta_star + kSeparabilityTol) {
      out.argmin_set.push_back(i);
    }
  }
  return out;
}

double expected_risk(const DiscreteModelSpace& space, std::span<const double> rn,
                     ExecPolicy policy) {
  require_probability(space, rn);
  return kernels::weighted_sum(space.risks, rn, space.weights, policy);
}

double f_divergence(const DiscreteModelSpace& space, std::span<const double> rn,
                    const DivergenceSpec& spec, ExecPolicy policy) {
  require_probability(space, rn);
  bool infinite = false;
  const double d = kernels::generator_sum(spec, rn, space.weights, policy, &infinite);
  if (infinite) {
    throw InfiniteDivergence("density ratio vanishes on an atom while f(0) is infinite");
  }
  return d;
}

double kl_divergence(const DiscreteModelSpace& space,
                     std::span<const double> rn_num,
                     std::span<const double> rn_den, ExecPolicy policy) {
  require_probability(space, rn_num);
  require_probability(space, rn_den);
  for (std::size_t i = 0; i < rn_num.size(); ++i) {
    if (rn_num[i] > 0.0 && rn_den[i] == 0.0) {
      throw NotAbsolutelyContinuous(
          "numerator measure puts mass where the denominator vanishes, atom " +
          std::to_string(i));
    }
  }
  return kernels::chunked_sum(rn_num.size(), policy, [&](std::size_t i) {
    if (rn_num[i] == 0.0) return 0.0;  // 0 log 0 = 0
    return rn_num[i] * std::log(rn_num[i] / rn_den[i]) * space.weights[i];
  });
}

}  // namespace ermfdr
