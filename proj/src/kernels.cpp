#include "ermfdr/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ermfdr::kernels {

namespace {

// Reduction with per-chunk domain tracking. term(i) is only evaluated for
// in-domain atoms; the smallest violating index wins.
template <class InDomain, class Term>
double checked_sum(std::size_t n, ExecPolicy policy, DomainStatus* status,
                   InDomain&& in_domain, Term&& term) {
  DomainStatus local;
  double total = 0.0;
  if (n == 0) {
    if (status) *status = local;
    return total;
  }
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  if (policy == ExecPolicy::serial) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_domain(i)) {
        local.ok = false;
        local.bad_atom = i;
        break;
      }
      total += term(i);
    }
  } else {
    std::vector<double> partial(nchunks, 0.0);
    std::vector<std::size_t> bad(nchunks, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
      const std::size_t end = std::min(n, begin + kChunk);
      double s = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        if (!in_domain(i)) {
          bad[static_cast<std::size_t>(c)] = i;
          break;
        }
        s += term(i);
      }
      partial[static_cast<std::size_t>(c)] = s;
    }
    for (std::size_t c = 0; c < nchunks; ++c) {
      if (bad[c] < n) {
        local.ok = false;
        local.bad_atom = bad[c];
        break;
      }
      total += partial[c];
    }
  }
  if (status) *status = local;
  return local.ok ? total : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double density_sum(const DivergenceSpec& spec, double lambda, double b,
                   std::span<const double> risks, std::span<const double> weights,
                   ExecPolicy policy, DomainStatus* status) {
  const Interval dom = spec.conjugate_domain();
  const double inv_lambda = 1.0 / lambda;
  return checked_sum(
      risks.size(), policy, status,
      [&](std::size_t i) { return dom.contains(-(b + risks[i]) * inv_lambda); },
      [&](std::size_t i) {
        return weights[i] * spec.fdot_inv(-(b + risks[i]) * inv_lambda);
      });
}

void fill_density(const DivergenceSpec& spec, double lambda, double b,
                  std::span<const double> risks, std::span<double> out,
                  ExecPolicy policy, DomainStatus* status) {
  const Interval dom = spec.conjugate_domain();
  const double inv_lambda = 1.0 / lambda;
  const std::size_t n = risks.size();
  std::size_t bad = n;
  if (policy == ExecPolicy::serial) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = -(b + risks[i]) * inv_lambda;
      if (!dom.contains(v)) {
        bad = i;
        break;
      }
      out[i] = spec.fdot_inv(v);
    }
  } else {
    std::size_t shared_bad = n;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : shared_bad)
#endif
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
      const double v = -(b + risks[i]) * inv_lambda;
      if (!dom.contains(v)) {
        shared_bad = std::min(shared_bad, i);
        continue;
      }
      out[i] = spec.fdot_inv(v);
    }
    bad = shared_bad;
  }
  if (status) {
    status->ok = bad == n;
    status->bad_atom = bad == n ? 0 : bad;
  }
}

double curvature_sum(const DivergenceSpec& spec, std::span<const double> density,
                     std::span<const double> weights, ExecPolicy policy) {
  return chunked_sum(density.size(), policy, [&](std::size_t i) {
    return weights[i] / spec.fddot(density[i]);
  });
}

double weighted_sum(std::span<const double> a, std::span<const double> w,
                    ExecPolicy policy) {
  return chunked_sum(a.size(), policy,
                     [&](std::size_t i) { return a[i] * w[i]; });
}

double weighted_sum(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w, ExecPolicy policy) {
  return chunked_sum(a.size(), policy,
                     [&](std::size_t i) { return a[i] * b[i] * w[i]; });
}

double generator_sum(const DivergenceSpec& spec, std::span<const double> rn,
                     std::span<const double> weights, ExecPolicy policy,
                     bool* infinite) {
  const double f0 = spec.f_at_zero();
  bool inf_hit = false;
  const double s = chunked_sum(rn.size(), policy, [&](std::size_t i) {
    if (rn[i] == 0.0) {
      if (std::isinf(f0)) inf_hit = true;
      return std::isinf(f0) ? 0.0 : f0 * weights[i];
    }
    return spec.f(rn[i]) * weights[i];
  });
  if (infinite) *infinite = inf_hit;
  return s;
}

double conjugate_sum(const DivergenceSpec& spec, double lambda, double b,
                     std::span<const double> risks, std::span<const double> weights,
                     ExecPolicy policy, DomainStatus* status) {
  const Interval dom = spec.conjugate_domain();
  const double inv_lambda = 1.0 / lambda;
  return checked_sum(
      risks.size(), policy, status,
      [&](std::size_t i) { return dom.contains(-(b + risks[i]) * inv_lambda); },
      [&](std::size_t i) {
        return weights[i] * spec.conjugate(-(b + risks[i]) * inv_lambda);
      });
}

double conjugate_over_density_sum(const DivergenceSpec& spec, double lambda,
                                  double b, std::span<const double> risks,
                                  std::span<const double> density,
                                  std::span<const double> weights,
                                  ExecPolicy policy, DomainStatus* status) {
  const Interval dom = spec.conjugate_domain();
  const double inv_lambda = 1.0 / lambda;
  return checked_sum(
      risks.size(), policy, status,
      [&](std::size_t i) { return dom.contains(-(b + risks[i]) * inv_lambda); },
      [&](std::size_t i) {
        return weights[i] * spec.conjugate(-(b + risks[i]) * inv_lambda) /
               density[i];
      });
}

std::vector<double> zero_one_risk_field(std::span<const double> xs,
                                        std::span<const double> ys,
                                        std::span<const int> labels,
                                        double grid_lo, double grid_hi,
                                        int resolution, ExecPolicy policy) {
  const std::size_t n_atoms =
      static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  const std::size_t n_samples = labels.size();
  std::vector<double> field(n_atoms, 0.0);
  const double step =
      resolution > 1 ? (grid_hi - grid_lo) / (resolution - 1) : 0.0;
  const double inv_n = n_samples > 0 ? 1.0 / static_cast<double>(n_samples) : 0.0;

  auto eval_atom = [&](std::size_t a) {
    const int i = static_cast<int>(a) / resolution;
    const int j = static_cast<int>(a) % resolution;
    const double t0 = grid_lo + step * i;
    const double t1 = grid_lo + step * j;
    std::size_t errors = 0;
    for (std::size_t s = 0; s < n_samples; ++s) {
      const double score = xs[s] * t0 + ys[s] * t1;
      const bool correct =
          (score > 0.0 && labels[s] > 0) || (score < 0.0 && labels[s] < 0);
      errors += correct ? 0 : 1;
    }
    field[a] = static_cast<double>(errors) * inv_n;
  };

  if (policy == ExecPolicy::serial) {
    for (std::size_t a = 0; a < n_atoms; ++a) eval_atom(a);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(n_atoms); ++a) {
      eval_atom(static_cast<std::size_t>(a));
    }
  }
  return field;
}

}  // namespace ermfdr::kernels
