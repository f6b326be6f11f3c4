#include "sss/problems.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

namespace sss {

SparseSkewMatrix advection_matrix(const AdvectionConfig& cfg) {
  if (cfg.n1 < 1 || cfg.n2 < 1)
    throw std::invalid_argument("advection_matrix: n1, n2 must be >= 1");
  const int n1 = cfg.n1, n2 = cfg.n2;
  const double h1 = 1.0 / n1, h2 = 1.0 / n2;
  const double cx = 1.0 / (2.0 * h1);
  const double cy = cfg.gamma / (2.0 * h2);

  // Grid point (i, k) with i the block (second coordinate) and k the position
  // inside the block; only the strict upper triangle is listed, the mirror is
  // implied.
  std::vector<SparseSkewMatrix::Triplet> trips;
  trips.reserve(static_cast<std::size_t>(n2) * (n1 - 1) +
                static_cast<std::size_t>(n1) * (n2 - 1));
  auto idx = [n1](int block, int k) { return block * n1 + k; };
  for (int block = 0; block < n2; ++block)
    for (int k = 0; k + 1 < n1; ++k)
      trips.push_back({idx(block, k), idx(block, k + 1), cx});
  if (cy != 0.0)
    for (int block = 0; block + 1 < n2; ++block)
      for (int k = 0; k < n1; ++k)
        trips.push_back({idx(block, k), idx(block + 1, k), cy});
  return SparseSkewMatrix::from_triplets(n1 * n2, trips);
}

SssSystem make_sss_system(const AdvectionConfig& cfg) {
  SparseSkewMatrix s = advection_matrix(cfg);
  const int n = cfg.dimension();
  std::mt19937_64 gen(cfg.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector b(n);
  for (double& v : b) v = dist(gen);
  const double nb = kernels::nrm2(b);
  if (nb > 0.0) kernels::scal(1.0 / nb, b);
  return SssSystem{SssOperator(cfg.alpha, std::move(s)), std::move(b),
                   Vector(n, 0.0)};
}

std::pair<Eigen::MatrixXd, SparseSkewMatrix> hermitian_split(const Eigen::MatrixXd& B) {
  if (B.rows() != B.cols())
    throw std::invalid_argument("hermitian_split: matrix must be square");
  const int n = static_cast<int>(B.rows());
  Eigen::MatrixXd H = 0.5 * (B + B.transpose());
  Eigen::MatrixXd K = 0.5 * (B - B.transpose());
  std::vector<SparseSkewMatrix::Triplet> trips;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (K(i, j) != 0.0) trips.push_back({i, j, K(i, j)});
  return {std::move(H), SparseSkewMatrix::from_triplets(n, trips)};
}

TransformedSystem diagonal_scale_transform(const Vector& d, const SparseSkewMatrix& s,
                                           const Vector& b) {
  const int n = s.size();
  if (static_cast<int>(d.size()) != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("diagonal_scale_transform: dimension mismatch");
  Vector dinv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    if (!(d[i] > 0.0))
      throw std::invalid_argument("diagonal_scale_transform: D must be positive");
    dinv_sqrt[i] = 1.0 / std::sqrt(d[i]);
  }

  // S' = D^{-1/2} S D^{-1/2}: scale each stored entry by the two row factors.
  std::vector<SparseSkewMatrix::Triplet> trips;
  const auto& rp = s.row_ptr();
  const auto& ci = s.col_idx();
  const auto& va = s.values();
  for (int i = 0; i < n; ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (ci[k] > i)
        trips.push_back({i, ci[k], va[k] * dinv_sqrt[i] * dinv_sqrt[ci[k]]});

  Vector bt(n);
  for (int i = 0; i < n; ++i) bt[i] = dinv_sqrt[i] * b[i];

  TransformedSystem out{SssOperator(1.0, SparseSkewMatrix::from_triplets(n, trips)),
                        std::move(bt), {}};
  out.back_map = [dinv_sqrt](const Vector& y) {
    Vector x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = dinv_sqrt[i] * y[i];
    return x;
  };
  return out;
}

TransformedSystem spd_split_transform(const Eigen::MatrixXd& H, const SparseSkewMatrix& s,
                                      const Vector& b) {
  const int n = s.size();
  if (H.rows() != n || H.cols() != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("spd_split_transform: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spd_split_transform: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0)
    throw std::invalid_argument("spd_split_transform: H is not positive definite");
  Eigen::MatrixXd hinv_sqrt =
      es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  hinv_sqrt = 0.5 * (hinv_sqrt + hinv_sqrt.transpose());  // exact symmetry

  Eigen::MatrixXd sp = hinv_sqrt * dense_matrix(s) * hinv_sqrt;
  sp = 0.5 * (sp - sp.transpose());  // kill roundoff on the skew structure
  std::vector<SparseSkewMatrix::Triplet> trips;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (sp(i, j) != 0.0) trips.push_back({i, j, sp(i, j)});

  Eigen::Map<const Eigen::VectorXd> bm(b.data(), n);
  Eigen::VectorXd btv = hinv_sqrt * bm;
  Vector bt(btv.data(), btv.data() + n);

  TransformedSystem out{SssOperator(1.0, SparseSkewMatrix::from_triplets(n, trips)),
                        std::move(bt), {}};
  auto hs = std::make_shared<Eigen::MatrixXd>(std::move(hinv_sqrt));
  out.back_map = [hs](const Vector& y) {
    Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<int>(y.size()));
    Eigen::VectorXd xv = (*hs) * ym;
    return Vector(xv.data(), xv.data() + xv.size());
  };
  return out;
}

double condition_number(const SssOperator& a) {
  Eigen::MatrixXd A = dense_matrix(a);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

double condition_number_via_skew_spectrum(const SssOperator& a) {
  Eigen::MatrixXd S = dense_matrix(a.s);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(S);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv(0), smin = sv(sv.size() - 1);
  const double a2 = a.alpha * a.alpha;
  const double denom = a2 + smin * smin;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt((a2 + smax * smax) / denom);
}

Eigen::MatrixXd dense_matrix(const SparseSkewMatrix& s) {
  const int n = s.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const auto& rp = s.row_ptr();
  const auto& ci = s.col_idx();
  const auto& va = s.values();
  for (int i = 0; i < n; ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k) M(i, ci[k]) = va[k];
  return M;
}

Eigen::MatrixXd dense_matrix(const SssOperator& a) {
  Eigen::MatrixXd M = dense_matrix(a.s);
  M.diagonal().array() += a.alpha;
  return M;
}

}  // namespace sss
