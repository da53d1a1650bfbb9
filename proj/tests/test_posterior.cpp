#include <array>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "ermfdr/errors.hpp"
#include "ermfdr/posterior.hpp"
#include "helpers.hpp"

using namespace ermfdr;
using ermfdr::testing::random_space;
using ermfdr::testing::two_atom_space;

namespace {
const std::array<Divergence, 6> kAll = {
    Divergence::kl,           Divergence::reverse_kl, Divergence::jeffreys,
    Divergence::jensen_shannon, Divergence::hellinger, Divergence::chi_squared};

double feasible_lambda(const DiscreteModelSpace& space, Divergence id,
                       double base) {
  if (id != Divergence::chi_squared) return base;
  const auto summary = summarize(space);
  double risk_max = space.risks[0];
  for (double r : space.risks) risk_max = std::max(risk_max, r);
  return std::max(base, 1.3 * (risk_max - summary.r_q) + 0.1);
}
}  // namespace

TEST_CASE("posterior densities of the worked examples") {
  const auto space = two_atom_space();

  const auto kl_post = build_posterior(space, make_divergence(Divergence::kl),
                                       1.0, -0.3798854930417225);
  CHECK(kl_post.rn[0] == doctest::Approx(1.46211715726).epsilon(1e-9));
  CHECK(kl_post.rn[1] == doctest::Approx(0.53788284274).epsilon(1e-9));
  CHECK(kl_post.weights[0] + kl_post.weights[1] == doctest::Approx(1.0));

  const auto rkl_post = build_posterior(
      space, make_reverse_kl(ReverseKlMode::relaxed), 1.0, std::sqrt(0.5));
  CHECK(rkl_post.rn[0] == doctest::Approx(1.41421356237).epsilon(1e-9));
  CHECK(rkl_post.rn[1] == doctest::Approx(0.58578643763).epsilon(1e-9));

  const auto chi_post = build_posterior(
      space, make_divergence(Divergence::chi_squared), 1.0, -1.5);
  CHECK(chi_post.rn[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(chi_post.rn[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("stale normalization constant is rejected") {
  const auto space = two_atom_space();
  CHECK_THROWS_AS(
      (void)build_posterior(space, make_divergence(Divergence::kl), 1.0, 0.25),
      StaleBeta);
}

TEST_CASE("primal value equals minus the entropy log-partition") {
  const auto space = two_atom_space();
  const auto kl = make_divergence(Divergence::kl);
  const double beta = solve_normalization(space, kl, 1.0).beta;
  const auto posterior = build_posterior(space, kl, 1.0, beta);
  // R = 0.26894, lambda*D = 0.11094.
  CHECK(primal_value(space, posterior) ==
        doctest::Approx(0.3798854930417225).epsilon(1e-9));
}

TEST_CASE("primal value of the quadratic-generator example") {
  const auto space = two_atom_space();
  const auto chi2 = make_divergence(Divergence::chi_squared);
  const auto posterior = build_posterior(space, chi2, 1.0, -1.5);
  // R = 0.25 and lambda * D = 0.125.
  CHECK(primal_value(space, posterior) == doctest::Approx(0.375).epsilon(1e-12));
  // Cross-check against the dual optimum.
  CHECK(-dual_value(space, chi2, 1.0, -1.5) ==
        doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("nonseparable space: primal collapses to the reference risk") {
  const auto flat = DiscreteModelSpace::make({0.4, 0.4}, {0.5, 0.5});
  const auto kl = make_divergence(Divergence::kl);
  const auto solved = solve_normalization(flat, kl, 1.0);
  const auto posterior = build_posterior(flat, kl, 1.0, solved.beta);
  CHECK(primal_value(flat, posterior) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("dual objective at the root") {
  const auto space = two_atom_space();
  const auto kl = make_divergence(Divergence::kl);
  const double beta = solve_normalization(space, kl, 1.0).beta;
  // The conjugate term vanishes at the root for the entropy generator.
  CHECK(dual_value(space, kl, 1.0, beta) == doctest::Approx(beta).epsilon(1e-9));
  // Strict convexity of the dual objective around the root.
  for (Divergence id : kAll) {
    const auto spec = make_divergence(id);
    const double lambda = feasible_lambda(space, id, 1.0);
    const double root = solve_normalization(space, spec, lambda).beta;
    const double at_root = dual_value(space, spec, lambda, root);
    for (double delta : {1e-3, 1e-2}) {
      for (double sign : {-1.0, 1.0}) {
        double nearby;
        try {
          nearby = dual_value(space, spec, lambda, root + sign * delta);
        } catch (const OutOfDomain&) {
          continue;  // objective is +inf outside its domain
        }
        CHECK(nearby > at_root);
      }
    }
  }
  CHECK_THROWS_AS((void)dual_value(space, make_divergence(Divergence::chi_squared),
                                   1.0, 5.0),
                  OutOfDomain);
}

TEST_CASE("duality gap vanishes for every generator") {
  for (int rep = 0; rep < 8; ++rep) {
    const auto space = random_space(300 + rep, 3 + 11 * rep, 3.0, rep % 2 == 0);
    for (Divergence id : kAll) {
      const double lambda = feasible_lambda(space, id, 1.0 + 0.25 * rep);
      CHECK(std::abs(duality_gap(space, make_divergence(id), lambda)) <= 1e-7);
    }
  }
}

TEST_CASE("value identities at the solved constant") {
  for (int rep = 0; rep < 6; ++rep) {
    const auto space = random_space(500 + rep, 2 + 9 * rep, 3.0, rep % 2 == 1);
    for (Divergence id : kAll) {
      const auto spec = make_divergence(id);
      const double lambda = feasible_lambda(space, id, 1.0 + 0.5 * (rep % 3));
      const auto report = objective_identities(space, spec, lambda);
      CHECK(std::abs(report.optimal_value_residual) <= 1e-8);
      CHECK(std::abs(report.reference_risk_residual) <= 1e-8);
    }
  }
}

TEST_CASE("entropy and reverse-entropy specializations") {
  const auto space = two_atom_space();
  {
    const auto report =
        objective_identities(space, make_divergence(Divergence::kl), 1.0);
    REQUIRE(report.has_kl_specialization);
    CHECK(std::abs(report.kl_cumulant_residual) <= 1e-8);
  }
  {
    const auto report = objective_identities(
        space, make_reverse_kl(ReverseKlMode::relaxed), 1.0);
    REQUIRE(report.has_reverse_kl_specialization);
    CHECK(std::abs(report.reverse_kl_risk_residual) <= 1e-8);
    // R = 1 - sqrt(1/2) in the worked example.
    const auto solved =
        solve_normalization(space, make_reverse_kl(ReverseKlMode::relaxed), 1.0);
    const auto posterior = build_posterior(
        space, make_reverse_kl(ReverseKlMode::relaxed), 1.0, solved.beta);
    const double risk =
        space.risks[0] * posterior.weights[0] + space.risks[1] * posterior.weights[1];
    CHECK(risk == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-9));
  }
  {
    // Canonical mode reports the same residual through the mode shift.
    const auto report = objective_identities(
        space, make_divergence(Divergence::reverse_kl), 1.0);
    REQUIRE(report.has_reverse_kl_specialization);
    CHECK(std::abs(report.reverse_kl_risk_residual) <= 1e-8);
  }
}

TEST_CASE("risk-gap closed forms") {
  const auto space = two_atom_space();
  CHECK(std::abs(risk_gap_residual(space, make_divergence(Divergence::kl), 1.0)) <=
        1e-9);
  CHECK(std::abs(risk_gap_residual(
            space, make_reverse_kl(ReverseKlMode::relaxed), 1.0)) <= 1e-9);
  CHECK(std::abs(risk_gap_residual(
            space, make_divergence(Divergence::reverse_kl), 1.0)) <= 1e-9);
  CHECK_THROWS_AS(
      (void)risk_gap_residual(space, make_divergence(Divergence::hellinger), 1.0),
      NotApplicable);
  // Nonseparable: both sides are zero.
  const auto flat = DiscreteModelSpace::make({0.2, 0.2}, {0.5, 0.5});
  CHECK(std::abs(risk_gap_residual(flat, make_divergence(Divergence::kl), 1.0)) <=
        1e-12);
}

TEST_CASE("upper bound from the mean conjugate argument") {
  for (int rep = 0; rep < 5; ++rep) {
    const auto space = random_space(700 + rep, 4 + 7 * rep, 2.0);
    for (Divergence id : kAll) {
      const double lambda = feasible_lambda(space, id, 1.0);
      const auto report = jensen_bound(space, make_divergence(id), lambda);
      if (!report.applicable) continue;
      CHECK(report.slack >= -1e-10);
      CHECK(report.slack > 0.0);  // strict for separable spaces
    }
  }
  // Nonseparable collapse: the bound is attained.
  const auto flat = DiscreteModelSpace::make({0.3, 0.3}, {0.5, 0.5});
  const auto report = jensen_bound(flat, make_divergence(Divergence::kl), 1.0);
  CHECK(std::abs(report.slack) <= 1e-10);
}

TEST_CASE("posterior risk grows with the regularization factor") {
  // Risk gaps small enough that no density underflows at the smallest factor.
  const auto space = DiscreteModelSpace::make({0.0, 0.02, 0.04, 0.07},
                                              {0.25, 0.25, 0.25, 0.25});
  const std::vector<double> lambdas = {1e-4, 0.01, 0.1, 1.0, 10.0, 100.0, 1e4};
  const auto report =
      risk_monotone_in_lambda(space, make_divergence(Divergence::kl), lambdas);
  CHECK(report.worst_chain_violation <= 1e-10);
  CHECK(report.worst_bound_violation <= 1e-10);
  // Concentration on the best atoms at the small end of the grid.
  CHECK(report.risks.front() <= report.delta_star + 1e-3);
  // Flattening onto the reference measure at the large end.
  CHECK(std::abs(report.risks.back() - report.reference_risk) <= 1e-3);
}

TEST_CASE("slope of the canonical generator has nonnegative posterior mean") {
  // sum_i fdot(g_i) g_i q_i >= 0 for canonical members, on solver output.
  for (int rep = 0; rep < 6; ++rep) {
    const auto space = random_space(800 + rep, 3 + 8 * rep, 4.0, rep % 2 == 0);
    for (Divergence id : kAll) {
      const auto spec = canonicalize(make_divergence(id));
      const double lambda = feasible_lambda(space, id, 1.0);
      const double beta = solve_normalization(space, spec, lambda).beta;
      const auto posterior = build_posterior(space, spec, lambda, beta);
      double mean = 0.0;
      for (std::size_t i = 0; i < space.size(); ++i) {
        mean += spec.fdot(posterior.rn[i]) * posterior.rn[i] * space.weights[i];
      }
      CHECK(mean >= -1e-10);
    }
  }
}

TEST_CASE("density ordering and maximum across generators") {
  const auto space =
      DiscreteModelSpace::make({0.3, 0.0, 0.7, 0.0, 1.2}, {0.2, 0.2, 0.2, 0.2, 0.2});
  const auto summary = summarize(space);
  for (Divergence id : kAll) {
    const auto spec = make_divergence(id);
    const double lambda = feasible_lambda(space, id, 1.0);
    const double beta = solve_normalization(space, spec, lambda).beta;
    const auto posterior = build_posterior(space, spec, lambda, beta);
    for (std::size_t i = 0; i < space.size(); ++i) {
      for (std::size_t j = 0; j < space.size(); ++j) {
        if (space.risks[i] < space.risks[j]) {
          CHECK(posterior.rn[i] > posterior.rn[j]);
        } else if (space.risks[i] == space.risks[j]) {
          CHECK(posterior.rn[i] == posterior.rn[j]);  // exact tie handling
        }
      }
    }
    const double bound = spec.fdot_inv(-(summary.delta_star + beta) / lambda);
    double max_rn = 0.0;
    for (double g : posterior.rn) max_rn = std::max(max_rn, g);
    CHECK(max_rn == doctest::Approx(bound).epsilon(1e-12));
    for (std::size_t i : summary.argmin_set) {
      CHECK(posterior.rn[i] == doctest::Approx(bound).epsilon(1e-12));
    }
  }
}
