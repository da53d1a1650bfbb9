#include "ermfdr/lambert.hpp"

#include <algorithm>
#include <cmath>

#include "ermfdr/errors.hpp"

namespace ermfdr {

namespace {
constexpr double kInvE = 0.36787944117144232160;  // 1/e
constexpr double kE = 2.71828182845904523536;
}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x) || x < -kInvE) {
    throw DomainError("lambert_w0: argument must be >= -1/e");
  }
  if (x == 0.0) return 0.0;

  double w;
  if (x < 0.0) {
    // Branch-point series in p = sqrt(2(1 + e x)).
    const double s = std::max(0.0, 2.0 * (1.0 + kE * x));
    const double p = std::sqrt(s);
    if (p < 1e-8) return -1.0;
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  } else {
    w = std::log1p(x);
  }

  // Damped Halley iteration on w*exp(w) - x.
  const double target = 1e-15 * std::max(std::abs(x), 1e-290);
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double r = w * ew - x;
    if (std::abs(r) <= target) break;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * r / (2.0 * wp1);
    double step = r / denom;
    double next = w - step;
    int halvings = 0;
    while (next < -1.0 && halvings++ < 32) {
      step *= 0.5;
      next = w - step;
    }
    if (next == w) break;
    w = next;
  }
  return w;
}

double lambert_w0_of_exp(double y) {
  if (y <= 700.0) return lambert_w0(std::exp(y));
  // h + log(h) = y, Newton from the asymptotic seed y - log(y).
  double h = y - std::log(y);
  for (int it = 0; it < 32; ++it) {
    const double r = h + std::log(h) - y;
    const double step = r * h / (h + 1.0);
    h -= step;
    if (std::abs(step) <= 1e-15 * h) break;
  }
  return h;
}

}  // namespace ermfdr
