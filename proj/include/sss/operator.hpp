#pragma once

#include <cmath>
#include <utility>

#include "sss/sparse_skew.hpp"

namespace sss {

// A = alpha*I + S. A is normal by construction; A^T = alpha*I - S is derived
// rather than stored. Immutable after construction.
struct SssOperator {
  double alpha = 0.0;
  SparseSkewMatrix s;

  SssOperator(double a, SparseSkewMatrix skew) : alpha(a), s(std::move(skew)) {}

  int size() const { return s.size(); }

  // |alpha| + max row 1-norm of S; cheap scale estimate for thresholds.
  double norm_estimate() const { return std::abs(alpha) + s.norm_inf(); }

  void apply(const Vector& x, Vector& y, bool transpose = false,
             OpCounters* c = nullptr) const {
    s.apply_shifted(alpha, x, y, transpose, c);
  }
};

Vector sss_apply(const SssOperator& a, const Vector& x, bool transpose = false,
                 OpCounters* c = nullptr);

// ||b - A x||_2, uncounted by default (auditing path).
double true_residual_norm(const SssOperator& a, const Vector& b, const Vector& x);

}  // namespace sss
