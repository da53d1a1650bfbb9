#include "ermfdr/divergence.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ermfdr/errors.hpp"
#include "ermfdr/lambert.hpp"

namespace ermfdr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

// h(v) = W0(exp(1 - v)); the density ratio of the symmetrized entropy
// generator is 1/h(v).
double symmetrized_h(double v) { return lambert_w0_of_exp(1.0 - v); }
}  // namespace

double DivergenceSpec::f(double u) const {
  double base;
  switch (id) {
    case Divergence::kl:
      base = (u == 0.0) ? 1.0 : u * std::log(u) - u + 1.0;
      break;
    case Divergence::reverse_kl:
      base = -std::log(u) + u - 1.0;
      break;
    case Divergence::jeffreys:
      base = (u == 0.0) ? kInf : (u - 1.0) * std::log(u);
      break;
    case Divergence::jensen_shannon:
      base = (u == 0.0) ? kLn2
                        : u * (kLn2 - std::log1p(1.0 / u)) + kLn2 - std::log1p(u);
      break;
    case Divergence::hellinger: {
      const double r = 1.0 - std::sqrt(u);
      base = r * r;
      break;
    }
    case Divergence::chi_squared:
      base = 0.5 * (u * u - 1.0);
      break;
    default:
      base = std::numeric_limits<double>::quiet_NaN();
  }
  return base - affine_shift * (u - 1.0);
}

double DivergenceSpec::fdot(double u) const {
  double base;
  switch (id) {
    case Divergence::kl:
      base = std::log(u);
      break;
    case Divergence::reverse_kl:
      base = 1.0 - 1.0 / u;
      break;
    case Divergence::jeffreys:
      base = std::log(u) + 1.0 - 1.0 / u;
      break;
    case Divergence::jensen_shannon:
      base = kLn2 - std::log1p(1.0 / u);
      break;
    case Divergence::hellinger:
      base = 1.0 - 1.0 / std::sqrt(u);
      break;
    case Divergence::chi_squared:
      base = u;
      break;
    default:
      base = std::numeric_limits<double>::quiet_NaN();
  }
  return base - affine_shift;
}

double DivergenceSpec::fdot_inv(double v) const {
  const double w = v + affine_shift;
  switch (id) {
    case Divergence::kl:
      return std::exp(w);
    case Divergence::reverse_kl:
      return 1.0 / (1.0 - w);
    case Divergence::jeffreys:
      return 1.0 / symmetrized_h(w);
    case Divergence::jensen_shannon:
      return 1.0 / std::expm1(kLn2 - w);
    case Divergence::hellinger: {
      const double d = 1.0 - w;
      return 1.0 / (d * d);
    }
    case Divergence::chi_squared:
      return w;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DivergenceSpec::fddot(double u) const {
  switch (id) {
    case Divergence::kl:
      return 1.0 / u;
    case Divergence::reverse_kl:
      return 1.0 / (u * u);
    case Divergence::jeffreys:
      return 1.0 / u + 1.0 / (u * u);
    case Divergence::jensen_shannon:
      return 1.0 / (u * (u + 1.0));
    case Divergence::hellinger:
      return 0.5 / (u * std::sqrt(u));
    case Divergence::chi_squared:
      return 1.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double DivergenceSpec::conjugate(double v) const {
  const double w = v + affine_shift;
  double base;
  switch (id) {
    case Divergence::kl:
      base = std::expm1(w);
      break;
    case Divergence::reverse_kl:
      base = -std::log1p(-w);
      break;
    case Divergence::jeffreys: {
      const double h = symmetrized_h(w);
      base = w - 2.0 + h + 1.0 / h;
      break;
    }
    case Divergence::jensen_shannon:
      base = -(kLn2 + std::log1p(-std::exp(w - kLn2)));
      break;
    case Divergence::hellinger:
      base = w / (1.0 - w);
      break;
    case Divergence::chi_squared:
      base = 0.5 * (w * w + 1.0);
      break;
    default:
      base = std::numeric_limits<double>::quiet_NaN();
  }
  return base - affine_shift;
}

Interval DivergenceSpec::conjugate_domain() const {
  Interval base;
  switch (id) {
    case Divergence::kl:
    case Divergence::jeffreys:
      base = {-kInf, kInf};
      break;
    case Divergence::reverse_kl:
    case Divergence::hellinger:
      base = {-kInf, 1.0};
      break;
    case Divergence::jensen_shannon:
      base = {-kInf, kLn2};
      break;
    case Divergence::chi_squared:
      base = {0.0, kInf};
      break;
    default:
      base = {0.0, 0.0};
  }
  return {base.lo - affine_shift, base.hi - affine_shift};
}

double DivergenceSpec::f_at_zero() const {
  double base;
  switch (id) {
    case Divergence::kl:
    case Divergence::hellinger:
      base = 1.0;
      break;
    case Divergence::reverse_kl:
    case Divergence::jeffreys:
      base = kInf;
      break;
    case Divergence::jensen_shannon:
      base = kLn2;
      break;
    case Divergence::chi_squared:
      base = -0.5;
      break;
    default:
      base = std::numeric_limits<double>::quiet_NaN();
  }
  return base + affine_shift;
}

bool DivergenceSpec::strictly_positive_inverse() const {
  switch (id) {
    case Divergence::kl:
    case Divergence::jeffreys:
    case Divergence::hellinger:
      return true;
    default:
      return false;
  }
}

bool DivergenceSpec::log_convex_inverse() const {
  return id != Divergence::chi_squared;
}

bool DivergenceSpec::canonical() const { return fdot(1.0) == 0.0; }

std::string DivergenceSpec::name() const {
  switch (id) {
    case Divergence::kl:
      return "kl";
    case Divergence::reverse_kl:
      return "reverse_kl";
    case Divergence::jeffreys:
      return "jeffreys";
    case Divergence::jensen_shannon:
      return "jensen_shannon";
    case Divergence::hellinger:
      return "hellinger";
    case Divergence::chi_squared:
      return "chi_squared";
  }
  return "unknown";
}

DivergenceSpec make_divergence(Divergence id) { return DivergenceSpec{id, 0.0}; }

Divergence parse_divergence_name(const std::string& name) {
  if (name == "kl") return Divergence::kl;
  if (name == "reverse_kl") return Divergence::reverse_kl;
  if (name == "jeffreys") return Divergence::jeffreys;
  if (name == "jensen_shannon") return Divergence::jensen_shannon;
  if (name == "hellinger") return Divergence::hellinger;
  if (name == "chi_squared") return Divergence::chi_squared;
  if (name == "total_variation") {
    throw NotStrictlyConvex(
        "total_variation: generator is not strictly convex and not "
        "differentiable at 1; no density-ratio solution exists");
  }
  throw std::invalid_argument("unknown divergence name: " + name);
}

DivergenceSpec make_divergence(const std::string& name) {
  return make_divergence(parse_divergence_name(name));
}

DivergenceSpec make_reverse_kl(ReverseKlMode mode) {
  // Relaxed mode drops the f'(1) = 0 normalization: f(u) = -log(u), whose
  // solved constant relates to the canonical one by beta_relaxed = beta + lambda.
  return DivergenceSpec{Divergence::reverse_kl,
                        mode == ReverseKlMode::relaxed ? 1.0 : 0.0};
}

DivergenceSpec canonicalize(const DivergenceSpec& spec) {
  DivergenceSpec out = spec;
  out.affine_shift += spec.fdot(1.0);
  return out;
}

}  // namespace ermfdr
