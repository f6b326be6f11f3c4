#pragma once

#include <optional>
#include <vector>

#include "sss/operator.hpp"

namespace sss {

// Rolling state of the shifted skew-symmetric Lanczos recurrence
//   q_j = -p_j / beta_j,  p_{j+1} = S q_j - beta_j q_{j-1},  beta_{j+1} = ||p_{j+1}||.
// Only two length-n buffers are held: after step j, q_curr holds q_j and the
// q_prev buffer has been overwritten in place with p_{j+1} (the fused
// multiply_sub_inplace consumes q_{j-1} while producing p_{j+1}).
struct LanczosState {
  Vector q_curr;  // q_j; q_0 = 0 before the first step
  Vector q_prev;  // q_{j-1} storage; holds p_{j+1} once step j completed
  double beta_curr = 0.0;  // beta_j
  double beta_next = 0.0;  // beta_{j+1} = exactly the computed ||p_{j+1}||
  int j = 0;

  Vector& p_next() { return q_prev; }
  const Vector& p_next() const { return q_prev; }
};

enum class LanczosEvent { stepped, lucky_breakdown };

// Prepares the recurrence with p_1 = r0, beta_1 = ||r0||, q_0 = 0.
// Returns nullopt when r0 = 0 (already converged; caller keeps x0).
// Counts one inner product and registers two work vectors on counters.
std::optional<LanczosState> lanczos_init(const Vector& r0, OpCounters* c = nullptr);

// One recurrence step. Returns lucky_breakdown (without stepping) when
// beta_next <= threshold: the Krylov space is exhausted and the solution is
// exact in exact arithmetic. Counts 1 matvec, 1 vector update, 1 inner product.
LanczosEvent lanczos_step(LanczosState& st, const SparseSkewMatrix& s,
                          double threshold, OpCounters* c = nullptr);

// Finite-precision stand-in for the exact-arithmetic guard beta > 0:
// n * eps * (|alpha| + ||S||_inf).
double lanczos_breakdown_threshold(const SssOperator& a);

// The (j+1) x j extended Ritz matrix: diagonal alpha, superdiagonal
// beta_{i+1}, subdiagonal -beta_{i+1}, trailing row (0,...,0,-beta_{j+1}).
struct ExtendedRitz {
  int j = 0;
  double alpha = 0.0;
  std::vector<double> betas;  // beta_2 .. beta_{j+1}

  double operator()(int row, int col) const;  // 0-based, (j+1) x j
  std::vector<double> dense() const;          // row-major (j+1) x j
};

ExtendedRitz assemble_extended_ritz(double alpha, const std::vector<double>& betas);

}  // namespace sss
