// Command-line front end: solve, sweep, check, equivalence, experiment.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ermfdr/equivalence.hpp"
#include "ermfdr/errors.hpp"
#include "ermfdr/experiment.hpp"
#include "ermfdr/io.hpp"
#include "ermfdr/posterior.hpp"
#include "ermfdr/properties.hpp"
#include "ermfdr/solver.hpp"

namespace {

using nlohmann::ordered_json;

void emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ermfdr::Error("cannot write " + out_path);
  out << body;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver for divergence-regularized risk minimization "
               "over discrete reference measures"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  app.add_option("--out", out_path, "Write output to this path instead of stdout");
  app.add_option("--format", format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "Seed for randomized subcommands");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Compute the normalization constant");
  std::string divergence_name, space_path;
  double lambda = 1.0;
  ermfdr::SolverConfig solver_cfg;
  solve_cmd->add_option("--divergence", divergence_name, "Divergence name")->required();
  solve_cmd->add_option("--lambda", lambda, "Regularization factor")->required();
  solve_cmd->add_option("--space", space_path, "Model space file (.csv/.json)")->required();
  solve_cmd->add_option("--tol", solver_cfg.tolerance, "Tolerance on |I(b) - 1|");
  solve_cmd->add_option("--max-iter", solver_cfg.max_iterations, "Iteration cap");

  // check
  auto* check_cmd =
      app.add_subcommand("check", "Residual report or the full property suite");
  bool run_suite_flag = false;
  int suite_instances = 10;
  std::string check_divergence, check_space;
  double check_lambda = 1.0;
  check_cmd->add_flag("--suite", run_suite_flag, "Run the randomized property suite");
  check_cmd->add_option("--instances", suite_instances, "Suite instances");
  check_cmd->add_option("--divergence", check_divergence, "Divergence name");
  check_cmd->add_option("--lambda", check_lambda, "Regularization factor");
  check_cmd->add_option("--space", check_space, "Model space file");

  // equivalence
  auto* equiv_cmd =
      app.add_subcommand("equivalence", "Risk transform between two generators");
  std::string from_name, to_name, equiv_space;
  double equiv_lambda = 1.0, c_shift = 0.0;
  equiv_cmd->add_option("--from", from_name, "Source divergence")->required();
  equiv_cmd->add_option("--to", to_name, "Target divergence")->required();
  equiv_cmd->add_option("--space", equiv_space, "Model space file")->required();
  equiv_cmd->add_option("--lambda", equiv_lambda, "Regularization factor")->required();
  equiv_cmd->add_option("--c-shift", c_shift, "Additive constant of the transform");

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Per-factor solution summary on a space file");
  std::string sweep_divergence, sweep_space;
  double sweep_lo = 1e-2, sweep_hi = 1e2;
  int sweep_points = 30;
  sweep_cmd->add_option("--divergence", sweep_divergence, "Divergence name")->required();
  sweep_cmd->add_option("--space", sweep_space, "Model space file")->required();
  sweep_cmd->add_option("--lambda-min", sweep_lo, "Smallest factor");
  sweep_cmd->add_option("--lambda-max", sweep_hi, "Largest factor");
  sweep_cmd->add_option("--points", sweep_points, "Grid size");

  // experiment
  auto* exp_cmd = app.add_subcommand(
      "experiment", "Synthetic train/test sweep over the model grid");
  std::string config_path;
  exp_cmd->add_option("--config", config_path, "JSON config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const auto space = ermfdr::load_space(space_path);
      const auto spec = ermfdr::make_divergence(divergence_name);
      const auto result =
          ermfdr::solve_normalization(space, spec, lambda, solver_cfg);
      ordered_json doc;
      doc["beta"] = result.beta;
      doc["residual"] = result.residual;
      doc["iterations"] = result.iterations;
      doc["feasible"] = result.feasible;
      emit(dump(doc), out_path);
    } else if (*check_cmd) {
      if (run_suite_flag) {
        const auto reports = ermfdr::run_suite(seed, suite_instances);
        emit(ermfdr::suite_to_json(reports), out_path);
        int failures = 0;
        for (const auto& r : reports) failures += r.status == "fail" ? 1 : 0;
        if (failures > 0) {
          std::fprintf(stderr, "%d property failure(s)\n", failures);
          return 1;
        }
      } else {
        if (check_divergence.empty() || check_space.empty()) {
          throw ermfdr::Error("check needs --divergence and --space (or --suite)");
        }
        const auto space = ermfdr::load_space(check_space);
        const auto spec = ermfdr::make_divergence(check_divergence);
        const auto solved = ermfdr::solve_normalization(space, spec, check_lambda);
        const auto identities =
            ermfdr::objective_identities(space, spec, check_lambda);
        const auto bound = ermfdr::jensen_bound(space, spec, check_lambda);
        ordered_json doc;
        doc["divergence"] = spec.name();
        doc["lambda"] = check_lambda;
        doc["beta"] = solved.beta;
        doc["normalization_residual"] = solved.residual;
        doc["duality_gap"] = ermfdr::duality_gap(space, spec, check_lambda);
        doc["optimal_value_residual"] = identities.optimal_value_residual;
        doc["reference_risk_residual"] = identities.reference_risk_residual;
        if (identities.has_kl_specialization) {
          doc["kl_cumulant_residual"] = identities.kl_cumulant_residual;
        }
        if (identities.has_reverse_kl_specialization) {
          doc["reverse_kl_risk_residual"] = identities.reverse_kl_risk_residual;
        }
        try {
          doc["risk_gap_residual"] =
              ermfdr::risk_gap_residual(space, spec, check_lambda);
        } catch (const ermfdr::NotApplicable&) {
          doc["risk_gap_residual"] = nullptr;
        }
        doc["jensen_bound_applicable"] = bound.applicable;
        if (bound.applicable) doc["jensen_bound_slack"] = bound.slack;
        emit(dump(doc), out_path);
      }
    } else if (*equiv_cmd) {
      const auto space = ermfdr::load_space(equiv_space);
      const auto report = ermfdr::verify_equivalence(
          space, ermfdr::make_divergence(from_name),
          ermfdr::make_divergence(to_name), equiv_lambda, c_shift);
      if (format == "csv") {
        std::string csv = "atom,risk,transformed_risk,source_rn,target_rn\n";
        char row[160];
        for (std::size_t i = 0; i < space.size(); ++i) {
          std::snprintf(row, sizeof row, "%zu,%.10g,%.10g,%.10g,%.10g\n", i,
                        space.risks[i], report.transform.transformed_risks[i],
                        report.source_rn[i], report.target_rn[i]);
          csv += row;
        }
        emit(csv, out_path);
      } else {
        ordered_json doc;
        doc["from"] = from_name;
        doc["to"] = to_name;
        doc["lambda"] = equiv_lambda;
        doc["c_shift"] = c_shift;
        doc["source_normalization"] = report.transform.source_normalization;
        doc["target_normalization"] = report.target_normalization;
        doc["max_rn_discrepancy"] = report.max_rn_discrepancy;
        doc["transformed_risks"] = report.transform.transformed_risks;
        emit(dump(doc), out_path);
      }
    } else if (*sweep_cmd) {
      const auto space = ermfdr::load_space(sweep_space);
      const auto spec = ermfdr::make_divergence(sweep_divergence);
      std::string csv = "lambda,beta,risk,divergence_value,primal,dual,feasible\n";
      ordered_json rows = ordered_json::array();
      for (int k = 0; k < sweep_points; ++k) {
        const double l =
            sweep_points == 1
                ? sweep_lo
                : std::exp(std::log(sweep_lo) + (std::log(sweep_hi) - std::log(sweep_lo)) *
                                                    k / (sweep_points - 1));
        ordered_json row;
        row["lambda"] = l;
        char line[200];
        try {
          const auto solved = ermfdr::solve_normalization(space, spec, l);
          const auto posterior =
              ermfdr::build_posterior(space, spec, l, solved.beta);
          const double risk = ermfdr::expected_risk(space, posterior.rn);
          const double div = ermfdr::f_divergence(space, posterior.rn, spec);
          const double primal = risk + l * div;
          const double dual = ermfdr::dual_value(space, spec, l, solved.beta);
          row["beta"] = solved.beta;
          row["risk"] = risk;
          row["divergence_value"] = div;
          row["primal"] = primal;
          row["dual"] = dual;
          row["feasible"] = true;
          std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,1\n",
                        l, solved.beta, risk, div, primal, dual);
        } catch (const ermfdr::Infeasible&) {
          row["feasible"] = false;
          std::snprintf(line, sizeof line, "%.10g,,,,,,0\n", l);
        }
        rows.push_back(row);
        csv += line;
      }
      emit(format == "csv" ? csv : dump(rows), out_path);
    } else if (*exp_cmd) {
      ermfdr::ExperimentConfig cfg;
      if (!config_path.empty()) cfg = ermfdr::load_experiment_config(config_path);
      if (app.count("--seed") > 0) cfg.seed = seed;
      const auto result = ermfdr::run_sweep(cfg);
      if (format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& r : result.records) {
          ordered_json row;
          row["divergence"] = ermfdr::make_divergence(r.divergence).name();
          row["lambda"] = r.lambda;
          row["train_mean"] = r.train_mean;
          row["train_std"] = r.train_std;
          row["test_mean"] = r.test_mean;
          row["test_std"] = r.test_std;
          row["gap_mean"] = r.gap_mean;
          row["gap_std"] = r.gap_std;
          row["beta_mean"] = r.beta_mean;
          row["feasible_frac"] = r.feasible_frac;
          rows.push_back(row);
        }
        emit(dump(rows), out_path);
      } else {
        emit(ermfdr::sweep_to_csv(result.records), out_path);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
