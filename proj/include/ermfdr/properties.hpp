#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ermfdr/divergence.hpp"
#include "ermfdr/solver.hpp"

namespace ermfdr {

// One named check evaluated on one randomized instance.
struct PropertyReport {
  std::string property;
  std::uint64_t seed = 0;      // instance seed
  int atom_count = 0;
  std::string divergence;
  double lambda = 0.0;
  std::string status;          // "pass" | "fail" | "not_applicable"
  double worst_residual = 0.0;
  double tolerance = 0.0;
};

// Numerical midpoint probe for log-convexity of the inverse derivative on a
// grid inside the conjugate domain.
bool log_convexity_probe(const DivergenceSpec& spec);

// Runs every named check over n_instances seeded random spaces for each of
// the six catalog generators. Deterministic given (seed, n_instances, cfg);
// failures come back as report rows, never as exceptions.
std::vector<PropertyReport> run_suite(std::uint64_t seed, int n_instances,
                                      const SolverConfig& cfg = {});

std::string suite_to_json(const std::vector<PropertyReport>& reports);

}  // namespace ermfdr
