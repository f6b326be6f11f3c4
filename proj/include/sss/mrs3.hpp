#pragma once

#include <optional>
#include <vector>

#include "sss/lanczos.hpp"
#include "sss/report.hpp"

namespace sss {

// Plane rotation acting on a pair of entries:
//   xk' =  c*xk + s*xl
//   xl' = -s*xk + c*xl
// Constructed so that applying it to its generating pair zeroes the second
// entry. c^2 + s^2 = 1.
struct GivensRotation {
  double c = 1.0;
  double s = 0.0;

  void apply(double& xk, double& xl) const {
    const double a = c * xk + s * xl;
    const double b = -s * xk + c * xl;
    xk = a;
    xl = b;
  }
};

// (0,0) yields the identity rotation by convention.
GivensRotation givens_from(double yk, double yl);

struct Mrs3Options {
  double tol = 1e-8;
  int maxit = 1000;
  int audit_every = 10;  // 0 disables auditing
  bool debug = false;    // retain full recurrence history (desk scale only)
};

// Full per-iteration history retained in debug mode, for the oracle checks
// (U_j back-substitution, W_j U_j = Q_j reconstruction, closed forms).
struct Mrs3Debug {
  double r0_norm = 0.0;                  // beta_1
  std::vector<double> betas;             // beta_2 .. beta_{j+1}
  std::vector<GivensRotation> rotations; // G_1 .. G_j
  std::vector<double> u_diag;            // u_j(j) per iteration
  std::vector<double> u_super2;          // u_j(j-2) per iteration (0 for j <= 2)
  std::vector<double> u_super1;          // rotated entry at j-1: the non-trivial zero
  std::vector<double> u_below;           // rotated entry at j+1: zeroed by G_j
  std::vector<double> mus;               // mu_j = v_j(j)
  std::vector<Vector> q_cols;            // q_1 .. q_j
  std::vector<Vector> w_cols;            // w_1 .. w_j
};

// Minimal residual solve of (alpha*I + S) x = b with short recurrences.
// Per iteration: 1 matvec, 3 vector updates, 1 inner product; 5 live work
// vectors in steady state. The recurred |eps_j| equals ||b - A x_j||; on
// convergence one uncounted true-residual evaluation confirms the estimate,
// retrying up to 5 extra iterations before reporting estimate_drift.
SolveReport mrs3_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                       const Mrs3Options& opts, Mrs3Debug* debug = nullptr);

// The Z-sequence from the sparsity analysis of the rotated Ritz columns:
//   Z_1 = alpha^2, Z_{i+1} = R_{i+1} + beta_{i+1}^2 with R_2 = Z_1 and
//   R_{i+1} = Z_1 * Z_i / R_i (the alternating-product recursion in ratio
//   form). Test oracle for the column diagonals u_j(j) = sqrt(Z_{j+1}) and
//   the rotation coefficients s_i = -beta_{i+1} / sqrt(Z_{i+1}).
// Returns nullopt when a recursion denominator vanishes (possible for
// alpha = 0), in which case the oracle is inapplicable.
struct ZSequence {
  std::vector<double> z;  // z[i] = Z_{i+1}, i = 0 .. betas.size()
};
std::optional<ZSequence> z_sequence(double alpha, const std::vector<double>& betas);

// Debug/test only: back-substitutes U_j xi = v_j from the retained rotation
// history; x_j must equal x_0 + Q_j xi. Throws std::runtime_error on a
// vanishing diagonal.
std::vector<double> recover_xi(const ExtendedRitz& ritz,
                               const std::vector<GivensRotation>& rotations,
                               double r0_norm);

}  // namespace sss
