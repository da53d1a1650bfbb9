#pragma once

#include <string>

namespace ermfdr {

enum class Divergence {
  kl,
  reverse_kl,
  jeffreys,
  jensen_shannon,
  hellinger,
  chi_squared,
};

enum class ReverseKlMode { canonical, relaxed };

// Open interval; lo/hi may be +-infinity.
struct Interval {
  double lo;
  double hi;
  bool contains(double v) const { return v > lo && v < hi; }
};

// A strictly convex, differentiable generator together with every calculus
// object the solver needs: derivative, inverse derivative, second derivative,
// convex conjugate, and the conjugate's open domain.
//
// affine_shift selects a member of the affine family
//     f_s(u) = f(u) - s * (u - 1),
// which induces the same divergence value but a shifted normalization
// constant. Shift 0 is the catalog default; canonicalize() picks the member
// with f'(1) = 0.
struct DivergenceSpec {
  Divergence id;
  double affine_shift = 0.0;

  double f(double u) const;
  double fdot(double u) const;
  double fdot_inv(double v) const;  // inverse of fdot; caller checks conjugate_domain
  double fddot(double u) const;
  double conjugate(double v) const;  // Legendre-Fenchel transform f*

  // Range of fdot over (0, inf) = open domain of the conjugate.
  Interval conjugate_domain() const;
  // lim_{u -> 0+} fdot(u); equals conjugate_domain().lo.
  double fdot_at_zero() const { return conjugate_domain().lo; }
  // lim_{u -> 0+} f(u); may be +inf.
  double f_at_zero() const;

  // fdot_inv stays strictly positive on the whole real line.
  bool strictly_positive_inverse() const;
  // fdot_inv is log-convex on its domain.
  bool log_convex_inverse() const;

  bool canonical() const;
  std::string name() const;
};

// Catalog entry under the default normalization (canonical, except
// chi_squared which defaults to the raw quadratic form with fdot(1) = 1).
DivergenceSpec make_divergence(Divergence id);

// Accepts the lowercase names used by the CLI and config files. A request for
// "total_variation" is rejected with NotStrictlyConvex; anything else unknown
// throws std::invalid_argument.
DivergenceSpec make_divergence(const std::string& name);

DivergenceSpec make_reverse_kl(ReverseKlMode mode);

// Member of the affine family with fdot(1) = 0. Divergence values are
// unchanged; the normalization constant shifts by lambda * fdot(1).
DivergenceSpec canonicalize(const DivergenceSpec& spec);

Divergence parse_divergence_name(const std::string& name);

}  // namespace ermfdr
