#include "ermfdr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "ermfdr/errors.hpp"
#include "ermfdr/kernels.hpp"
#include "ermfdr/posterior.hpp"
#include "ermfdr/rng.hpp"

namespace ermfdr {

void ExperimentConfig::validate() const {
  if (grid_resolution < 2) throw Error("grid_resolution must be >= 2");
  if (!(grid_min < grid_max)) throw Error("grid bounds must be ordered");
  if (!(lambda_min > 0.0) || !(lambda_min < lambda_max)) {
    throw Error("lambda grid must be positive and ascending");
  }
  if (lambda_points < 1) throw Error("lambda_points must be >= 1");
  if (trials < 1) throw Error("trials must be >= 1");
  if (train_size < 1 || test_size < 1) throw Error("dataset sizes must be >= 1");
  if (divergences.empty()) throw Error("divergence list must be nonempty");
  if (!(noise_scale >= 0.0)) throw Error("noise_scale must be nonnegative");
}

std::vector<double> ExperimentConfig::lambda_grid() const {
  std::vector<double> grid(static_cast<std::size_t>(lambda_points));
  if (lambda_points == 1) {
    grid[0] = lambda_min;
    return grid;
  }
  const double log_lo = std::log(lambda_min);
  const double log_hi = std::log(lambda_max);
  for (int k = 0; k < lambda_points; ++k) {
    grid[static_cast<std::size_t>(k)] =
        std::exp(log_lo + (log_hi - log_lo) * k / (lambda_points - 1));
  }
  return grid;
}

LabeledDataset generate_dataset(const ExperimentConfig& config, int count,
                                std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset data;
  data.xs.resize(static_cast<std::size_t>(count));
  data.ys.resize(static_cast<std::size_t>(count));
  data.labels.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const bool positive = (rng.bits() & 1ULL) != 0;
    const auto& mean = positive ? config.mean_positive : config.mean_negative;
    data.xs[static_cast<std::size_t>(i)] =
        mean[0] + config.noise_scale * rng.normal();
    data.ys[static_cast<std::size_t>(i)] =
        mean[1] + config.noise_scale * rng.normal();
    data.labels[static_cast<std::size_t>(i)] = positive ? 1 : -1;
  }
  return data;
}

DiscreteModelSpace risk_field(const LabeledDataset& dataset,
                              const ExperimentConfig& config) {
  if (dataset.size() == 0) throw Error("risk_field: empty dataset");
  const int res = config.grid_resolution;
  DiscreteModelSpace space;
  space.dim = 2;
  space.risks = kernels::zero_one_risk_field(
      dataset.xs, dataset.ys, dataset.labels, config.grid_min, config.grid_max,
      res, config.solver.policy);
  const std::size_t n = space.risks.size();
  space.weights.assign(n, 1.0 / static_cast<double>(n));
  space.atoms.resize(2 * n);
  const double step = (config.grid_max - config.grid_min) / (res - 1);
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) {
      const std::size_t a = static_cast<std::size_t>(i) * res + j;
      space.atoms[2 * a] = config.grid_min + step * i;
      space.atoms[2 * a + 1] = config.grid_min + step * j;
    }
  }
  return space;
}

namespace {

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::vector<double> lambdas = config.lambda_grid();
  const std::size_t n_div = config.divergences.size();
  const std::size_t n_lambda = lambdas.size();

  struct Cell {
    std::vector<double> train, test, gap, beta;
    int feasible = 0;
  };
  std::vector<Cell> cells(n_div * n_lambda);

  SweepResult out;

  for (int trial = 0; trial < config.trials; ++trial) {
    const LabeledDataset train = generate_dataset(
        config, config.train_size,
        mix_seed(config.seed, 2 * static_cast<std::uint64_t>(trial)));
    const LabeledDataset test = generate_dataset(
        config, config.test_size,
        mix_seed(config.seed, 2 * static_cast<std::uint64_t>(trial) + 1));

    DiscreteModelSpace space = risk_field(train, config);
    const std::vector<double> test_risks =
        kernels::zero_one_risk_field(test.xs, test.ys, test.labels,
                                     config.grid_min, config.grid_max,
                                     config.grid_resolution,
                                     config.solver.policy);
    const RiskSummary summary = summarize(space);
    out.reference_risk_mean += summary.r_q / config.trials;

    for (std::size_t d = 0; d < n_div; ++d) {
      const DivergenceSpec spec = make_divergence(config.divergences[d]);
      double prev_train = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n_lambda; ++k) {
        Cell& cell = cells[d * n_lambda + k];
        try {
          const NormalizationResult solved =
              solve_normalization(space, spec, lambdas[k], config.solver);
          const GibbsPosterior posterior = build_posterior(
              space, spec, lambdas[k], solved.beta, config.solver.policy);
          const double train_risk = kernels::weighted_sum(
              space.risks, posterior.rn, space.weights, config.solver.policy);
          const double test_risk = kernels::weighted_sum(
              test_risks, posterior.rn, space.weights, config.solver.policy);
          cell.train.push_back(train_risk);
          cell.test.push_back(test_risk);
          cell.gap.push_back(test_risk - train_risk);
          cell.beta.push_back(solved.beta);
          cell.feasible += 1;

          out.max_chain_violation =
              std::max(out.max_chain_violation, prev_train - train_risk);
          out.max_bound_violation =
              std::max({out.max_bound_violation, summary.delta_star - train_risk,
                        train_risk - summary.r_q});
          prev_train = train_risk;
        } catch (const Infeasible&) {
          out.infeasible_count += 1;
        }
      }
    }
  }

  out.records.reserve(cells.size());
  for (std::size_t d = 0; d < n_div; ++d) {
    for (std::size_t k = 0; k < n_lambda; ++k) {
      const Cell& cell = cells[d * n_lambda + k];
      SweepRecord rec;
      rec.divergence = config.divergences[d];
      rec.lambda = lambdas[k];
      const Moments train = moments(cell.train);
      const Moments test = moments(cell.test);
      const Moments gap = moments(cell.gap);
      const Moments beta = moments(cell.beta);
      rec.train_mean = train.mean;
      rec.train_std = train.stddev;
      rec.test_mean = test.mean;
      rec.test_std = test.stddev;
      rec.gap_mean = gap.mean;
      rec.gap_std = gap.stddev;
      rec.beta_mean = beta.mean;
      rec.feasible_frac =
          static_cast<double>(cell.feasible) / static_cast<double>(config.trials);
      out.records.push_back(rec);
    }
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
  std::string csv =
      "divergence,lambda,train_mean,train_std,test_mean,test_std,gap_mean,"
      "gap_std,beta_mean,feasible_frac\n";
  for (const SweepRecord& r : records) {
    csv += make_divergence(r.divergence).name();
    csv += ',';
    csv += format_number(r.lambda);
    for (double v : {r.train_mean, r.train_std, r.test_mean, r.test_std,
                     r.gap_mean, r.gap_std, r.beta_mean, r.feasible_frac}) {
      csv += ',';
      csv += format_number(v);
    }
    csv += '\n';
  }
  return csv;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error(path + ": invalid JSON: " + e.what());
  }

  ExperimentConfig cfg;
  if (doc.contains("grid_min")) cfg.grid_min = doc["grid_min"].get<double>();
  if (doc.contains("grid_max")) cfg.grid_max = doc["grid_max"].get<double>();
  if (doc.contains("grid_resolution")) {
    cfg.grid_resolution = doc["grid_resolution"].get<int>();
  }
  if (doc.contains("divergences")) {
    cfg.divergences.clear();
    for (const auto& name : doc["divergences"]) {
      cfg.divergences.push_back(parse_divergence_name(name.get<std::string>()));
    }
  }
  if (doc.contains("lambda_min")) cfg.lambda_min = doc["lambda_min"].get<double>();
  if (doc.contains("lambda_max")) cfg.lambda_max = doc["lambda_max"].get<double>();
  if (doc.contains("lambda_points")) {
    cfg.lambda_points = doc["lambda_points"].get<int>();
  }
  if (doc.contains("trials")) cfg.trials = doc["trials"].get<int>();
  if (doc.contains("train_size")) cfg.train_size = doc["train_size"].get<int>();
  if (doc.contains("test_size")) cfg.test_size = doc["test_size"].get<int>();
  if (doc.contains("mean_positive")) {
    cfg.mean_positive = doc["mean_positive"].get<std::array<double, 2>>();
  }
  if (doc.contains("mean_negative")) {
    cfg.mean_negative = doc["mean_negative"].get<std::array<double, 2>>();
  }
  if (doc.contains("noise_scale")) cfg.noise_scale = doc["noise_scale"].get<double>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("tolerance")) cfg.solver.tolerance = doc["tolerance"].get<double>();
  cfg.validate();
  return cfg;
}

}  // namespace ermfdr
