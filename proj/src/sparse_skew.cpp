#include "sss/sparse_skew.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>

#include "sss/operator.hpp"

namespace sss {

namespace {

void check_dim(const SparseSkewMatrix& s, const Vector& x) {
  if (static_cast<int>(x.size()) != s.size())
    throw std::invalid_argument("vector length " + std::to_string(x.size()) +
                                " does not match matrix dimension " +
                                std::to_string(s.size()));
}

}  // namespace

SparseSkewMatrix SparseSkewMatrix::from_triplets(int n,
                                                 const std::vector<Triplet>& entries,
                                                 double tol) {
  if (n < 1) throw std::invalid_argument("matrix dimension must be >= 1");

  std::map<std::pair<int, int>, double> coo;
  for (const auto& [i, j, v] : entries) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::invalid_argument("triplet index out of range");
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite matrix entry");
    if (i == j) {
      if (std::abs(v) > tol)
        throw std::invalid_argument("nonzero diagonal entry breaks skew-symmetry");
      continue;
    }
    if (v == 0.0) continue;
    if (!coo.emplace(std::make_pair(i, j), v).second)
      throw std::invalid_argument("duplicate entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
  }

  // Pair the triangles: check what is present on both sides, mirror the rest.
  std::map<std::pair<int, int>, double> full;
  for (const auto& [ij, v] : coo) {
    auto [i, j] = ij;
    auto mirror = coo.find({j, i});
    if (mirror != coo.end()) {
      if (std::abs(v + mirror->second) > tol)
        throw std::invalid_argument("skew-symmetry violated at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
      if (i < j) {
        full[{i, j}] = v;
        full[{j, i}] = -v;  // exact pairing even if the input only matched to tol
      }
    } else {
      full[{i, j}] = v;
      full[{j, i}] = -v;
    }
  }

  SparseSkewMatrix s;
  s.n_ = n;
  s.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [ij, v] : full) {
    (void)v;
    ++s.row_ptr_[static_cast<std::size_t>(ij.first) + 1];
  }
  for (int i = 0; i < n; ++i) s.row_ptr_[i + 1] += s.row_ptr_[i];
  s.col_idx_.resize(full.size());
  s.val_.resize(full.size());
  std::vector<int> cursor(s.row_ptr_.begin(), s.row_ptr_.end() - 1);
  for (const auto& [ij, v] : full) {
    int pos = cursor[ij.first]++;
    s.col_idx_[pos] = ij.second;
    s.val_[pos] = v;
  }

  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int k = s.row_ptr_[i]; k < s.row_ptr_[i + 1]; ++k) row += std::abs(s.val_[k]);
    norm = std::max(norm, row);
  }
  s.norm_inf_ = norm;
  return s;
}

SparseSkewMatrix SparseSkewMatrix::zero(int n) { return from_triplets(n, {}); }

void SparseSkewMatrix::multiply(const Vector& x, Vector& y, OpCounters* c) const {
  check_dim(*this, x);
  y.resize(x.size());
  const auto body = [&](int i) {
    double acc = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += val_[k] * x[col_idx_[k]];
    y[i] = acc;
  };
  if (kernels::backend() == kernels::Backend::parallel && n_ >= 2048) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_; ++i) body(i);
  } else {
    for (int i = 0; i < n_; ++i) body(i);
  }
  if (c) ++c->matvecs;
}

void SparseSkewMatrix::multiply_sub_inplace(const Vector& q, double beta, Vector& y,
                                            OpCounters* c) const {
  check_dim(*this, q);
  check_dim(*this, y);
  const auto body = [&](int i) {
    double acc = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += val_[k] * q[col_idx_[k]];
    y[i] = acc - beta * y[i];
  };
  if (kernels::backend() == kernels::Backend::parallel && n_ >= 2048) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_; ++i) body(i);
  } else {
    for (int i = 0; i < n_; ++i) body(i);
  }
  if (c) ++c->matvecs;
}

void SparseSkewMatrix::apply_shifted(double alpha, const Vector& x, Vector& y,
                                     bool transpose, OpCounters* c) const {
  check_dim(*this, x);
  y.resize(x.size());
  const double sign = transpose ? -1.0 : 1.0;
  const auto body = [&](int i) {
    double acc = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += val_[k] * x[col_idx_[k]];
    y[i] = alpha * x[i] + sign * acc;
  };
  if (kernels::backend() == kernels::Backend::parallel && n_ >= 2048) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_; ++i) body(i);
  } else {
    for (int i = 0; i < n_; ++i) body(i);
  }
  if (c) ++c->matvecs;
}

double SparseSkewMatrix::entry(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::invalid_argument("entry index out of range");
  auto first = col_idx_.begin() + row_ptr_[i];
  auto last = col_idx_.begin() + row_ptr_[i + 1];
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val_[static_cast<std::size_t>(it - col_idx_.begin())];
}

Vector skew_matvec(const SparseSkewMatrix& s, const Vector& x, OpCounters* c) {
  Vector y;
  s.multiply(x, y, c);
  return y;
}

bool verify_skew(const SparseSkewMatrix& s, double tol) {
  const auto& rp = s.row_ptr();
  const auto& ci = s.col_idx();
  const auto& v = s.values();
  for (int i = 0; i < s.size(); ++i) {
    for (int k = rp[i]; k < rp[i + 1]; ++k) {
      if (ci[k] == i && std::abs(v[k]) > tol) return false;
      if (std::abs(v[k] + s.entry(ci[k], i)) > tol) return false;
    }
  }
  return true;
}

Vector sss_apply(const SssOperator& a, const Vector& x, bool transpose, OpCounters* c) {
  Vector y;
  a.apply(x, y, transpose, c);
  return y;
}

double true_residual_norm(const SssOperator& a, const Vector& b, const Vector& x) {
  Vector ax;
  a.apply(x, ax);
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double d = b[i] - ax[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace sss
