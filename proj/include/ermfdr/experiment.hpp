#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ermfdr/divergence.hpp"
#include "ermfdr/model_space.hpp"
#include "ermfdr/solver.hpp"

namespace ermfdr {

// Synthetic binary-classification sweep: a uniform prior over a bounded 2-d
// grid of linear-threshold models, two Gaussian blobs, zero-one loss, and a
// log-spaced grid of regularization factors evaluated per train/test split.
struct ExperimentConfig {
  double grid_min = -50.0;
  double grid_max = 50.0;
  int grid_resolution = 101;
  std::vector<Divergence> divergences = {
      Divergence::kl, Divergence::reverse_kl, Divergence::jensen_shannon,
      Divergence::hellinger};
  double lambda_min = 1e-2;
  double lambda_max = 1e2;
  int lambda_points = 30;
  int trials = 100;
  int train_size = 500;
  int test_size = 500;
  std::array<double, 2> mean_positive = {1.0, 1.0};
  std::array<double, 2> mean_negative = {-1.0, -1.0};
  double noise_scale = 0.5;  // isotropic standard deviation of both blobs
  std::uint64_t seed = 0;
  SolverConfig solver;

  void validate() const;
  std::vector<double> lambda_grid() const;  // ascending, log-spaced
};

struct LabeledDataset {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<int> labels;  // +1 / -1
  std::size_t size() const { return labels.size(); }
};

// count points from the two blobs, label +-1 each with probability 1/2.
// Identical output for identical (config, count, seed).
LabeledDataset generate_dataset(const ExperimentConfig& config, int count,
                                std::uint64_t seed);

// Uniform-weight model space over the grid with per-atom zero-one risk.
DiscreteModelSpace risk_field(const LabeledDataset& dataset,
                              const ExperimentConfig& config);

struct SweepRecord {
  Divergence divergence;
  double lambda = 0.0;
  double train_mean = 0.0;
  double train_std = 0.0;
  double test_mean = 0.0;
  double test_std = 0.0;
  double gap_mean = 0.0;
  double gap_std = 0.0;
  double beta_mean = 0.0;
  double feasible_frac = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // |divergences| x |lambda grid| rows
  // Worst per-trial violation of the risk chain delta* <= R(lambda_1) <= ...
  // <= R(Q) across all (trial, divergence) pairs.
  double max_chain_violation = 0.0;
  double max_bound_violation = 0.0;
  int infeasible_count = 0;
  double reference_risk_mean = 0.0;  // mean of R(Q) on the training field
};

SweepResult run_sweep(const ExperimentConfig& config);

// Stable schema:
// divergence,lambda,train_mean,train_std,test_mean,test_std,gap_mean,gap_std,beta_mean,feasible_frac
std::string sweep_to_csv(const std::vector<SweepRecord>& records);

// JSON file mirroring the ExperimentConfig field names; missing keys keep
// their defaults.
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace ermfdr
