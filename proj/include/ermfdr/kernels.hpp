#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ermfdr/divergence.hpp"
#include "ermfdr/model_space.hpp"

// Per-atom reduction and map kernels. Every reduction has a plain sequential
// reference path (ExecPolicy::serial) and a chunked OpenMP path
// (ExecPolicy::parallel). The parallel path accumulates fixed-size chunk
// partials and combines them in chunk order, so its result does not depend on
// the thread count.

namespace ermfdr::kernels {

inline constexpr std::size_t kChunk = 4096;

// Chunked deterministic sum of term(i) for i in [0, n).
template <class Term>
double chunked_sum(std::size_t n, ExecPolicy policy, Term&& term);

struct DomainStatus {
  bool ok = true;
  std::size_t bad_atom = 0;  // smallest violating index when !ok
};

// sum_i q_i * fdot_inv(v_i) with v_i = -(b + L_i)/lambda. Reports the first
// atom whose v_i leaves the open conjugate domain instead of summing garbage.
double density_sum(const DivergenceSpec& spec, double lambda, double b,
                   std::span<const double> risks, std::span<const double> weights,
                   ExecPolicy policy, DomainStatus* status);

// Writes g_i = fdot_inv(v_i) per atom; same domain reporting.
void fill_density(const DivergenceSpec& spec, double lambda, double b,
                  std::span<const double> risks, std::span<double> out,
                  ExecPolicy policy, DomainStatus* status);

// sum_i q_i / fddot(fdot_inv(v_i)); multiplied by -1/lambda this is dI/db.
double curvature_sum(const DivergenceSpec& spec, std::span<const double> density,
                     std::span<const double> weights, ExecPolicy policy);

// sum_i a_i w_i
double weighted_sum(std::span<const double> a, std::span<const double> w,
                    ExecPolicy policy);

// sum_i a_i b_i w_i
double weighted_sum(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w, ExecPolicy policy);

// sum_i f(rn_i) q_i with the f(0) right limit; sets *infinite when a zero atom
// meets f(0) = +inf.
double generator_sum(const DivergenceSpec& spec, std::span<const double> rn,
                     std::span<const double> weights, ExecPolicy policy,
                     bool* infinite);

// sum_i f*(v_i) q_i, and the variant weighted by 1/g_i.
double conjugate_sum(const DivergenceSpec& spec, double lambda, double b,
                     std::span<const double> risks, std::span<const double> weights,
                     ExecPolicy policy, DomainStatus* status);
double conjugate_over_density_sum(const DivergenceSpec& spec, double lambda,
                                  double b, std::span<const double> risks,
                                  std::span<const double> density,
                                  std::span<const double> weights,
                                  ExecPolicy policy, DomainStatus* status);

// Zero-one risk of every model on a square grid of directions against a
// 2-d labeled dataset: L(theta) = (1/n) sum_j 1[prediction mismatch], where
// the prediction is the sign of <x_j, theta> and an exact zero counts as an
// error. Grid atoms run row-major over (axis0, axis1).
std::vector<double> zero_one_risk_field(std::span<const double> xs,
                                        std::span<const double> ys,
                                        std::span<const int> labels,
                                        double grid_lo, double grid_hi,
                                        int resolution, ExecPolicy policy);

// --- implementation ---

template <class Term>
double chunked_sum(std::size_t n, ExecPolicy policy, Term&& term) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  if (policy == ExecPolicy::serial) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(n, begin + kChunk);
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace ermfdr::kernels
