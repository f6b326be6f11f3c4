#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "sss/counters.hpp"
#include "sss/kernels.hpp"

namespace sss {

// Compressed-row storage of a skew-symmetric matrix S with S^T = -S.
// Both triangles are stored; the pairing (i,j,v) <-> (j,i,-v) is enforced
// at construction. Diagonal entries are never stored. Immutable after
// construction and safe to share across concurrent solves.
class SparseSkewMatrix {
 public:
  using Triplet = std::tuple<int, int, double>;

  // Builds from coordinate entries. Entries may cover both triangles or just
  // one; a missing mirror entry is filled in as -v. When both (i,j) and (j,i)
  // are present, |v_ij + v_ji| <= tol is required (tol = 0 for
  // exactly-representable inputs). Duplicate entries and diagonal values
  // exceeding tol are rejected. Exact zeros are dropped.
  static SparseSkewMatrix from_triplets(int n, const std::vector<Triplet>& entries,
                                        double tol = 0.0);

  static SparseSkewMatrix zero(int n);

  int size() const { return n_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(val_.size()); }

  // max_i sum_j |S_ij|, computed once at construction.
  double norm_inf() const { return norm_inf_; }

  // y = S x
  void multiply(const Vector& x, Vector& y, OpCounters* c = nullptr) const;

  // y = S q - beta * y, single fused sweep (the Lanczos update). Counts one
  // matvec; the subtraction rides along in the same row loop.
  void multiply_sub_inplace(const Vector& q, double beta, Vector& y,
                            OpCounters* c = nullptr) const;

  // y = alpha*x + S x, or alpha*x - S x when transpose (A^T = alpha I - S).
  void apply_shifted(double alpha, const Vector& x, Vector& y, bool transpose,
                     OpCounters* c = nullptr) const;

  double entry(int i, int j) const;  // 0 when not stored

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return val_; }

 private:
  SparseSkewMatrix() = default;

  int n_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> val_;
  double norm_inf_ = 0.0;
};

// y = S x as a value-returning convenience; increments the matvec counter.
Vector skew_matvec(const SparseSkewMatrix& s, const Vector& x, OpCounters* c = nullptr);

// true iff max |S_ij + S_ji| <= tol over all stored entries.
bool verify_skew(const SparseSkewMatrix& s, double tol);

}  // namespace sss
