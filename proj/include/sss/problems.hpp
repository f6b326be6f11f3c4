#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <tuple>

#include "sss/operator.hpp"

namespace sss {

// Advection test family: central finite differences for
// u_x + gamma * u_y on the unit square with n1 x n2 grid points.
// Block-tridiagonal skew matrix with diagonal blocks
// (1/2h1)*tridiag(-1,0,1) and coupling blocks +-(1/2h2)*diag(gamma),
// h1 = 1/n1, h2 = 1/n2.
struct AdvectionConfig {
  int n1 = 20;
  int n2 = 20;
  double gamma = 1.0;
  double alpha = 1.0;
  std::uint64_t seed = 0;

  int dimension() const { return n1 * n2; }
};

SparseSkewMatrix advection_matrix(const AdvectionConfig& cfg);

// A = alpha*I + S, b uniform on (-1,1) from the seeded generator and
// normalized to ||b|| = 1, x0 = 0.
struct SssSystem {
  SssOperator a;
  Vector b;
  Vector x0;
};
SssSystem make_sss_system(const AdvectionConfig& cfg);

// B = H + S with H = (B + B^T)/2 and S = (B - B^T)/2. Desk scale.
std::pair<Eigen::MatrixXd, SparseSkewMatrix> hermitian_split(const Eigen::MatrixXd& B);

// Transformed system plus the map recovering the original unknowns from the
// transformed solution.
struct TransformedSystem {
  SssOperator a;  // alpha = 1
  Vector b;
  std::function<Vector(const Vector&)> back_map;
};

// (D + S) dx = b  ->  (I + D^{-1/2} S D^{-1/2}) y = D^{-1/2} b, dx = D^{-1/2} y.
// d holds the (strictly positive) diagonal of D.
TransformedSystem diagonal_scale_transform(const Vector& d, const SparseSkewMatrix& s,
                                           const Vector& b);

// (H + S) x = b  ->  (I + H^{-1/2} S H^{-1/2}) y = H^{-1/2} b, x = H^{-1/2} y.
// H must be SPD; dense eigendecomposition, desk scale.
TransformedSystem spd_split_transform(const Eigen::MatrixXd& H, const SparseSkewMatrix& s,
                                      const Vector& b);

// kappa_2 = sigma_max / sigma_min via dense SVD of A. Returns +inf for a
// singular operator. Desk scale (n <= 2000).
double condition_number(const SssOperator& a);

// Same value through the skew spectrum: sqrt((alpha^2 + s_max^2) /
// (alpha^2 + s_min^2)) with +-i*s the eigenvalues of S (s = singular values
// of S). Cross-check route for condition_number.
double condition_number_via_skew_spectrum(const SssOperator& a);

// Dense materializations for desk-scale oracles.
Eigen::MatrixXd dense_matrix(const SparseSkewMatrix& s);
Eigen::MatrixXd dense_matrix(const SssOperator& a);

}  // namespace sss
