#pragma once

#include <optional>

#include "sss/operator.hpp"
#include "sss/report.hpp"

namespace sss {

// Instrumented reference solvers. Each records ||r_j|| per iteration and the
// operation counters; a denominator at roundoff scale reports Status::breakdown
// with the vanished quantity named in breakdown_detail instead of producing
// Inf/NaN. Residual improvement below 1e-14 relative over 50 consecutive
// iterations reports Status::stagnated.

// Truncated GCR / Orthomin(1). For alpha = 0 the method provably breaks down
// in the second iteration; the report carries that as Status::breakdown.
SolveReport trunc_gcr_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                            const SolveOptions& opts);

// GCR with full orthogonalization against all previous directions. Retains
// all direction vectors; desk scale, used as the Orthomin(1) equivalence
// oracle.
SolveReport full_gcr_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                           const SolveOptions& opts);

// Generalized CG three-term recurrence, H = alpha*I specialization. Starts
// from x_{-1} = x_0 = 0; alpha < 0 is handled by solving -A x = -b.
// alpha = 0 violates the positive-definite-symmetric-part requirement and
// throws std::invalid_argument.
SolveReport gencg_solve(const SssOperator& a, const Vector& b,
                        const SolveOptions& opts);

// Concus-Golub-Widlund, H = alpha*I specialization (z_j = r_j / alpha is
// eliminated algebraically). Galerkin iterates; alpha = 0 throws.
SolveReport cgw_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                      const SolveOptions& opts);

// Huang-Wathen-Li for the pure skew system S x = b (alpha = 0), with the
// explicit residual recomputation r_{j+1} = b - A x_{j+1} as published.
SolveReport hwl_solve(const SparseSkewMatrix& s, const Vector& b, const Vector& x0,
                      const SolveOptions& opts);

// CG on the normal equations A^T A x = A^T b; two matvecs per iteration.
SolveReport cgnr_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                       const SolveOptions& opts);

// Arnoldi + incremental Givens least squares; full when restart is empty.
SolveReport gmres_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                        const SolveOptions& opts, std::optional<int> restart = {});

// Classical Bi-CGSTAB recurrence.
SolveReport bicgstab_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                           const SolveOptions& opts);

}  // namespace sss
