#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sss/counters.hpp"
#include "sss/kernels.hpp"

namespace sss {

enum class Status {
  converged,
  max_iterations,
  breakdown,
  stagnated,
  exhausted,       // Krylov space exhausted (lucky breakdown) before the tolerance was met
  singular,        // numerical failure: a pivot that cannot vanish for nonsingular A did
  estimate_drift,  // recurred residual estimate met the tolerance, true residual did not
};

const char* to_string(Status s);

struct SolveReport {
  Status status = Status::max_iterations;
  int iterations = 0;
  std::vector<double> residual_history;  // entry 0 = ||r_0||, one entry per iteration
  // (iteration, ||b - A x_j||) pairs sampled at the auditing interval
  std::vector<std::pair<int, double>> audited_residuals;
  double true_final_residual = 0.0;
  OpCounters counters;
  std::string breakdown_detail;
  Vector x;
};

struct SolveOptions {
  double tol = 1e-8;
  int maxit = 1000;
  int audit_every = 10;  // 0 disables auditing
};

// Convergence target: ||r|| <= tol * (1 + ||b||).
inline double convergence_threshold(double tol, double b_norm) {
  return tol * (1.0 + b_norm);
}

}  // namespace sss
