#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sss/problems.hpp"
#include "sss/report.hpp"

namespace sss {

// Registered solver names, lowercase:
// mrs3, cgw, gencg, trunc-gcr, full-gcr, hwl, cgnr, gmres, gmres3, bicgstab.
const std::vector<std::string>& solver_registry();
bool is_registered_solver(const std::string& name);

struct FileProblem {
  std::string matrix_path;
  std::optional<double> alpha_override;
  std::optional<std::string> rhs_path;  // random unit b when absent
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::vector<std::string> solvers;
  std::variant<AdvectionConfig, FileProblem> problem;
  double tol = 1e-8;
  int maxit = 400;
  int audit_every = 10;
  bool debug_recurrences = false;
  bool compute_kappa = true;  // dense diagnostics capped at n <= 2000
  std::string out_dir;
};

struct ExperimentResult {
  std::vector<std::pair<std::string, SolveReport>> reports;
  std::optional<double> kappa;
};

// Runs every named solver on the configured problem, writes one
// "<out_dir>/<solver>.csv" history per solver plus "<out_dir>/summary.csv".
// A solver breakdown is a recorded result, not a failure. Deterministic for
// a fixed config and seed. Throws std::invalid_argument on an unknown solver
// name or invalid config.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// CSV schema: "iteration,residual_norm,true_residual_norm"; the true column
// is populated at audit points, empty otherwise. 17 significant digits.
void write_history_csv(const SolveReport& report, const std::string& path);

void write_summary_csv(const ExperimentResult& result, const std::string& path);

}  // namespace sss
