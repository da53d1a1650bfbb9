#include "ermfdr/properties.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "ermfdr/errors.hpp"
#include "ermfdr/kernels.hpp"
#include "ermfdr/model_space.hpp"
#include "ermfdr/posterior.hpp"
#include "ermfdr/rng.hpp"

namespace ermfdr {

namespace {

constexpr std::array<Divergence, 6> kCatalog = {
    Divergence::kl,           Divergence::reverse_kl, Divergence::jeffreys,
    Divergence::jensen_shannon, Divergence::hellinger, Divergence::chi_squared};

struct Instance {
  DiscreteModelSpace space;
  double lambda_base;
  std::uint64_t seed;
};

Instance make_instance(std::uint64_t suite_seed, int index) {
  static constexpr std::array<int, 4> kCounts = {2, 5, 20, 100};
  const std::uint64_t seed = mix_seed(suite_seed, static_cast<std::uint64_t>(index));
  Rng rng(seed);
  const int n = kCounts[static_cast<std::size_t>(index) % kCounts.size()];

  std::vector<double> risks(n);
  const bool heavy_tail = (index % 2) == 1;
  for (double& r : risks) {
    r = heavy_tail ? rng.exponential(2.0) : rng.uniform(0.0, 10.0);
  }
  std::vector<double> weights;
  if ((index / 2) % 2 == 1) {
    weights.resize(n);
    double total = 0.0;
    for (double& w : weights) {
      w = rng.uniform(0.01, 1.0);
      total += w;
    }
    for (double& w : weights) w /= total;
  }
  static constexpr std::array<double, 3> kLambdaBase = {0.5, 1.0, 2.0};
  Instance inst{DiscreteModelSpace::make(std::move(risks), std::move(weights)),
                kLambdaBase[static_cast<std::size_t>(index) % 3], seed};
  return inst;
}

// A regularization factor that is feasible for the given generator.
double pick_lambda(const Instance& inst, const DivergenceSpec& spec) {
  if (spec.id != Divergence::chi_squared) return inst.lambda_base;
  const RiskSummary summary = summarize(inst.space);
  const double risk_max =
      *std::max_element(inst.space.risks.begin(), inst.space.risks.end());
  const double lambda_star = risk_max - summary.r_q;
  return std::max(inst.lambda_base, 1.3 * std::max(lambda_star, 0.0) + 0.1);
}

struct Row {
  std::string property;
  double worst;
  double tol;
  bool applicable = true;
};

}  // namespace

bool log_convexity_probe(const DivergenceSpec& spec) {
  // Midpoint convexity of log fdot_inv sampled along v = fdot(u).
  std::vector<double> vs;
  for (int k = 0; k <= 40; ++k) {
    const double u = std::pow(10.0, -3.0 + 6.0 * k / 40.0);
    vs.push_back(spec.fdot(u));
  }
  for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
    const double mid = 0.5 * (vs[k] + vs[k + 1]);
    const double lhs = std::log(spec.fdot_inv(mid));
    const double rhs = 0.5 * (std::log(spec.fdot_inv(vs[k])) +
                              std::log(spec.fdot_inv(vs[k + 1])));
    if (lhs > rhs + 1e-9) return false;
  }
  return true;
}

std::vector<PropertyReport> run_suite(std::uint64_t seed, int n_instances,
                                      const SolverConfig& cfg) {
  std::vector<PropertyReport> reports;

  std::vector<Instance> instances;
  instances.reserve(static_cast<std::size_t>(n_instances));
  for (int k = 0; k < n_instances; ++k) instances.push_back(make_instance(seed, k));

  for (const Instance& inst : instances) {
    const RiskSummary summary = summarize(inst.space);
    const double risk_max =
        *std::max_element(inst.space.risks.begin(), inst.space.risks.end());

    for (Divergence id : kCatalog) {
      const DivergenceSpec spec = make_divergence(id);
      const double lambda = pick_lambda(inst, spec);
      std::vector<Row> rows;

      try {
        const NormalizationResult solved =
            solve_normalization(inst.space, spec, lambda, cfg);
        const GibbsPosterior posterior =
            build_posterior(inst.space, spec, lambda, solved.beta, cfg.policy);

        // Strict positivity of the density ratio on the whole support.
        const double min_rn =
            *std::min_element(posterior.rn.begin(), posterior.rn.end());
        rows.push_back({"positive_density", min_rn > 0.0 ? 0.0 : -min_rn, 0.0});

        rows.push_back({"zero_duality_gap",
                        std::abs(duality_gap(inst.space, spec, lambda, cfg)),
                        1e-7});

        // Density ordered against risk, ties exact.
        {
          std::vector<std::size_t> order(inst.space.size());
          for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
          std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return inst.space.risks[a] < inst.space.risks[b];
          });
          double worst = 0.0;
          for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            const std::size_t a = order[k], b = order[k + 1];
            worst = std::max(worst, posterior.rn[b] - posterior.rn[a]);
            if (inst.space.risks[a] == inst.space.risks[b]) {
              worst = std::max(worst,
                               std::abs(posterior.rn[a] - posterior.rn[b]));
            }
          }
          rows.push_back({"density_ordering", worst, 1e-12});
        }

        // Max density equals the value at the best risk, attained on argmins.
        {
          const double bound =
              spec.fdot_inv(-(summary.delta_star + solved.beta) / lambda);
          const double max_rn =
              *std::max_element(posterior.rn.begin(), posterior.rn.end());
          double worst = std::abs(max_rn - bound) / std::max(1.0, bound);
          for (std::size_t i : summary.argmin_set) {
            worst = std::max(worst, std::abs(posterior.rn[i] - bound) /
                                        std::max(1.0, bound));
          }
          rows.push_back({"density_max_bound", worst, 1e-9});
        }

        // Expected risk monotone over an ascending lambda grid. The grid
        // starts at the instance factor so every point stays feasible.
        {
          const std::array<double, 4> grid = {lambda, 1.5 * lambda, 2.0 * lambda,
                                              4.0 * lambda};
          const RiskMonotoneReport rep =
              risk_monotone_in_lambda(inst.space, spec, grid, cfg);
          rows.push_back({"risk_monotone_in_lambda",
                          std::max(rep.worst_chain_violation,
                                   rep.worst_bound_violation),
                          1e-10});
        }

        {
          const JensenBoundReport rep = jensen_bound(inst.space, spec, lambda, cfg);
          Row row{"jensen_upper_bound", rep.applicable ? -rep.slack : 0.0, 1e-10};
          row.applicable = rep.applicable;
          rows.push_back(row);
        }

        // Normalization constant nonincreasing in lambda, for generators whose
        // inverse derivative passes the log-convexity probe.
        {
          Row row{"normalization_decreasing", 0.0, 1e-8};
          if (!log_convexity_probe(spec)) {
            row.applicable = false;
          } else {
            double worst = 0.0;
            double prev = std::numeric_limits<double>::quiet_NaN();
            for (int k = 0; k < 8; ++k) {
              const double l = lambda * std::pow(2.0, -1.5 + 0.5 * k);
              const double beta =
                  solve_normalization(inst.space, spec, l, cfg).beta;
              if (k > 0) worst = std::max(worst, beta - prev);
              prev = beta;
            }
            row.worst = worst;
          }
          rows.push_back(row);
        }

        // Stability of the constant under a tiny relative bump of lambda.
        {
          const double bumped =
              solve_normalization(inst.space, spec, lambda * (1.0 + 1e-6), cfg)
                  .beta;
          rows.push_back({"normalization_stability",
                          std::abs(solved.beta - bumped) /
                              (1.0 + std::abs(solved.beta)),
                          1e-3});
        }

        // Two solves from different initial brackets land on the same root.
        {
          SolverConfig other = cfg;
          other.initial_bracket_width = 7.5;
          other.bracket_growth = 3.0;
          const double again =
              solve_normalization(inst.space, spec, lambda, other).beta;
          rows.push_back({"normalization_uniqueness",
                          std::abs(solved.beta - again), 10.0 * cfg.tolerance});
        }

        // The constant satisfies N = lambda N' - R(tilted), with N' from
        // central differences and the tilted measure weighted by 1/fddot.
        {
          const double h = cfg.fd_step;
          const double n_hi =
              solve_normalization(inst.space, spec, lambda * (1.0 + h), cfg).beta;
          const double n_lo =
              solve_normalization(inst.space, spec, lambda * (1.0 - h), cfg).beta;
          const double n_prime = (n_hi - n_lo) / (2.0 * lambda * h);
          std::vector<double> tilt(inst.space.size());
          double total = 0.0;
          for (std::size_t i = 0; i < tilt.size(); ++i) {
            tilt[i] = 1.0 / spec.fddot(posterior.rn[i]);
            total += tilt[i] * inst.space.weights[i];
          }
          for (double& t : tilt) t /= total;
          const double tilted_risk = kernels::weighted_sum(
              inst.space.risks, tilt, inst.space.weights, cfg.policy);
          const double residual =
              std::abs(solved.beta - (lambda * n_prime - tilted_risk)) /
              (1.0 + std::abs(solved.beta));
          rows.push_back({"normalization_ode_residual", residual, 1e-3});
        }

        // Feasibility is an interval: everything above a feasible factor is
        // feasible, and for the quadratic generator the designed factor below
        // the threshold is rejected.
        {
          auto feasible = [&](double l) {
            try {
              return solve_normalization(inst.space, spec, l, cfg).feasible;
            } catch (const Infeasible&) {
              return false;
            }
          };
          double worst = 0.0;
          for (int k = 1; k <= 4; ++k) {
            if (!feasible(lambda * (1.0 + 0.5 * k))) worst = 1.0;
          }
          if (spec.id == Divergence::chi_squared) {
            const double lambda_star = risk_max - summary.r_q;
            if (lambda_star > 0.1 && feasible(0.5 * lambda_star)) worst = 1.0;
          }
          rows.push_back({"feasible_set_convex", worst, 0.5});
        }
      } catch (const Error& e) {
        rows.push_back({std::string("suite_error:") + e.what(),
                        std::numeric_limits<double>::infinity(), 0.0});
      }

      for (const Row& row : rows) {
        PropertyReport report;
        report.property = row.property;
        report.seed = inst.seed;
        report.atom_count = static_cast<int>(inst.space.size());
        report.divergence = spec.name();
        report.lambda = lambda;
        report.worst_residual = row.worst;
        report.tolerance = row.tol;
        report.status = !row.applicable
                            ? "not_applicable"
                            : (row.worst <= row.tol ? "pass" : "fail");
        reports.push_back(std::move(report));
      }
    }
  }

  std::sort(reports.begin(), reports.end(),
            [](const PropertyReport& a, const PropertyReport& b) {
              if (a.property != b.property) return a.property < b.property;
              if (a.divergence != b.divergence) return a.divergence < b.divergence;
              return a.seed < b.seed;
            });
  return reports;
}

std::string suite_to_json(const std::vector<PropertyReport>& reports) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const PropertyReport& r : reports) {
    nlohmann::ordered_json row;
    row["property"] = r.property;
    row["seed"] = r.seed;
    row["atom_count"] = r.atom_count;
    row["divergence"] = r.divergence;
    row["lambda"] = r.lambda;
    row["status"] = r.status;
    row["worst_residual"] = r.worst_residual;
    row["tolerance"] = r.tolerance;
    doc.push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

}  // namespace ermfdr
