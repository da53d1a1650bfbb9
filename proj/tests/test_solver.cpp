#include <cmath>
#include <vector>

#include <doctest.h>

#include "ermfdr/errors.hpp"
#include "ermfdr/solver.hpp"
#include "helpers.hpp"

using namespace ermfdr;
using ermfdr::testing::random_space;
using ermfdr::testing::two_atom_space;

TEST_CASE("constraint integral on the worked example") {
  const auto space = two_atom_space();
  const auto kl = make_divergence(Divergence::kl);
  // (1 + e^-1)/2
  CHECK(constraint_integral(space, kl, 1.0, 0.0) ==
        doctest::Approx(0.6839397205857211).epsilon(1e-12));
  // At the root the integral is one by definition.
  const double beta = solve_normalization(space, kl, 1.0).beta;
  CHECK(constraint_integral(space, kl, 1.0, beta) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // Quadratic generator at b = 0: atom 2 argument leaves (0, inf).
  CHECK_THROWS_AS((void)constraint_integral(
                      space, make_divergence(Divergence::chi_squared), 1.0, 0.0),
                  OutOfDomain);
}

TEST_CASE("entropy root matches the log-partition closed form") {
  const auto space = two_atom_space();
  const auto kl = make_divergence(Divergence::kl);
  const auto result = solve_normalization(space, kl, 1.0);
  CHECK(result.feasible);
  CHECK(result.beta == doctest::Approx(-0.3798854930417225).epsilon(1e-9));
  CHECK(result.beta ==
        doctest::Approx(closed_form_beta_kl(space, 1.0)).epsilon(1e-9));
  CHECK(result.bracket_low <= result.beta);
  CHECK(result.beta <= result.bracket_high);
}

TEST_CASE("relaxed reverse-entropy root on the worked example") {
  const auto space = two_atom_space();
  const auto relaxed = make_reverse_kl(ReverseKlMode::relaxed);
  const auto result = solve_normalization(space, relaxed, 1.0);
  // 0.5 (1/b + 1/(1+b)) = 1 reduces to 2b^2 = 1.
  CHECK(result.beta == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  // Canonical member root sits exactly lambda lower.
  const auto canonical = make_divergence(Divergence::reverse_kl);
  CHECK(solve_normalization(space, canonical, 1.0).beta ==
        doctest::Approx(std::sqrt(0.5) - 1.0).epsilon(1e-8));
}

TEST_CASE("quadratic-generator root and closed form") {
  const auto space = two_atom_space();
  const auto chi2 = make_divergence(Divergence::chi_squared);
  const auto result = solve_normalization(space, chi2, 1.0);
  CHECK(result.beta == doctest::Approx(-1.5).epsilon(1e-9));
  CHECK(closed_form_beta_chi2(space, 1.0) == doctest::Approx(-1.5));
  CHECK(constraint_integral(space, chi2, 1.0, -1.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed forms on degenerate and asymptotic inputs") {
  const auto single = DiscreteModelSpace::make({0.7});
  CHECK(closed_form_beta_kl(single, 2.0) == doctest::Approx(-0.7).epsilon(1e-14));
  // Large lambda: the log-partition constant approaches -R(Q).
  const auto space = two_atom_space();
  CHECK(closed_form_beta_kl(space, 1e4) == doctest::Approx(-0.5).epsilon(1e-4));
  // Huge risks exercise the max-shift path.
  const auto big = DiscreteModelSpace::make({1e5, 2e5}, {0.5, 0.5});
  const double beta = closed_form_beta_kl(big, 0.5);
  CHECK(std::isfinite(beta));
  CHECK(beta == doctest::Approx(-1e5 + 0.5 * std::log(0.5)).epsilon(1e-10));
}

TEST_CASE("quadratic closed form rejects overspread risks") {
  const auto spread = DiscreteModelSpace::make({0.0, 10.0}, {0.5, 0.5});
  CHECK_THROWS_AS((void)closed_form_beta_chi2(spread, 1.0), Infeasible);
  CHECK_THROWS_AS(
      (void)solve_normalization(spread, make_divergence(Divergence::chi_squared), 1.0),
      Infeasible);
  // Constant risks: beta = -(lambda + c) and the posterior is the reference.
  const auto flat = DiscreteModelSpace::make({0.3, 0.3}, {0.5, 0.5});
  CHECK(closed_form_beta_chi2(flat, 2.0) == doctest::Approx(-2.3));
  const auto result =
      solve_normalization(flat, make_divergence(Divergence::chi_squared), 2.0);
  CHECK(result.degenerate);
  CHECK(result.beta == doctest::Approx(-2.3).epsilon(1e-12));
}

TEST_CASE("nonseparable spaces collapse to the reference for every generator") {
  const auto flat = DiscreteModelSpace::make({0.4, 0.4, 0.4}, {0.2, 0.5, 0.3});
  for (Divergence id : {Divergence::kl, Divergence::reverse_kl,
                        Divergence::jeffreys, Divergence::jensen_shannon,
                        Divergence::hellinger, Divergence::chi_squared}) {
    const auto spec = make_divergence(id);
    const auto result = solve_normalization(flat, spec, 1.5);
    CHECK(result.degenerate);
    CHECK(result.feasible);
    // Density at the root is identically one.
    CHECK(spec.fdot_inv(-(result.beta + 0.4) / 1.5) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("oracle equivalence over random spaces") {
  int chi2_feasible = 0;
  for (int rep = 0; rep < 12; ++rep) {
    const auto space = random_space(100 + rep, 2 + 17 * rep % 199, 10.0, rep % 2 == 1);
    for (double lambda : {0.1, 1.0, 10.0}) {
      const double expected = closed_form_beta_kl(space, lambda);
      const double solved =
          solve_normalization(space, make_divergence(Divergence::kl), lambda).beta;
      CHECK(std::abs(solved - expected) <= 1e-8);
      try {
        const double chi_expected = closed_form_beta_chi2(space, lambda);
        const double chi_solved =
            solve_normalization(space, make_divergence(Divergence::chi_squared),
                                lambda)
                .beta;
        CHECK(std::abs(chi_solved - chi_expected) <= 1e-8);
        ++chi2_feasible;
      } catch (const Infeasible&) {
        // Out of the feasible set; the solver must agree.
        CHECK_THROWS_AS(
            (void)solve_normalization(
                space, make_divergence(Divergence::chi_squared), lambda),
            Infeasible);
      }
    }
  }
  CHECK(chi2_feasible > 0);
}

TEST_CASE("constraint integral strictly decreasing in b") {
  const auto space = random_space(42, 20);
  for (Divergence id : {Divergence::kl, Divergence::reverse_kl,
                        Divergence::jensen_shannon, Divergence::hellinger}) {
    const auto spec = make_divergence(id);
    const auto result = solve_normalization(space, spec, 1.0);
    double prev = std::numeric_limits<double>::infinity();
    int evaluated = 0;
    for (int k = -3; k <= 3; ++k) {
      const double b = result.beta + 0.3 * k;
      double value;
      try {
        value = constraint_integral(space, spec, 1.0, b);
      } catch (const OutOfDomain&) {
        continue;  // probe left the admissible interval for this generator
      }
      CHECK(value < prev);
      prev = value;
      ++evaluated;
    }
    CHECK(evaluated >= 4);
  }
}

TEST_CASE("independent brackets land on the same root") {
  const auto space = random_space(77, 50);
  for (Divergence id : {Divergence::kl, Divergence::jeffreys,
                        Divergence::hellinger, Divergence::jensen_shannon}) {
    SolverConfig a;
    SolverConfig b;
    b.initial_bracket_width = 9.0;
    b.bracket_growth = 3.5;
    const double beta_a =
        solve_normalization(space, make_divergence(id), 0.7, a).beta;
    const double beta_b =
        solve_normalization(space, make_divergence(id), 0.7, b).beta;
    CHECK(std::abs(beta_a - beta_b) <= 10.0 * a.tolerance);
  }
}

TEST_CASE("feasible-set infimum") {
  const auto space = two_atom_space();
  CHECK(lambda_star_estimate(space, make_divergence(Divergence::kl)) == 0.0);
  CHECK(lambda_star_estimate(space, make_divergence(Divergence::jeffreys)) == 0.0);
  CHECK(lambda_star_estimate(space, make_divergence(Divergence::hellinger)) == 0.0);

  // Feasibility boundary lambda + R(Q) = max L gives lambda = 10 - 5.
  const auto spread = DiscreteModelSpace::make({0.0, 10.0}, {0.5, 0.5});
  const double star =
      lambda_star_estimate(spread, make_divergence(Divergence::chi_squared));
  CHECK(star == doctest::Approx(5.0).epsilon(1e-4));

  // Bounded-domain generators stay feasible everywhere on finite spaces.
  const double rkl_star =
      lambda_star_estimate(spread, make_divergence(Divergence::reverse_kl));
  CHECK(rkl_star <= 1e-4);
}

TEST_CASE("solver rejects nonpositive regularization") {
  CHECK_THROWS_AS(
      (void)solve_normalization(two_atom_space(), make_divergence(Divergence::kl), 0.0),
      Error);
  CHECK_THROWS_AS((void)closed_form_beta_kl(two_atom_space(), -1.0), Error);
}

TEST_CASE("tiny regularization concentrates, huge regularization flattens") {
  const auto space = DiscreteModelSpace::make({0.0, 0.4, 1.0}, {0.2, 0.3, 0.5});
  const auto kl = make_divergence(Divergence::kl);
  const double beta_small = solve_normalization(space, kl, 1e-4).beta;
  // Root approaches -delta* + lambda log(mass at delta*).
  CHECK(beta_small == doctest::Approx(1e-4 * std::log(0.2)).epsilon(1e-6));
  const double beta_large = solve_normalization(space, kl, 1e4).beta;
  CHECK(beta_large == doctest::Approx(-0.62).epsilon(1e-3));
}
