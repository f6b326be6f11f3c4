#include "sss/lanczos.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sss {

std::optional<LanczosState> lanczos_init(const Vector& r0, OpCounters* c) {
  if (c) c->vec_alloc(2);
  LanczosState st;
  st.q_curr.assign(r0.size(), 0.0);  // q_0
  st.q_prev = r0;                    // p_1 parked in the rotating buffer
  st.beta_next = kernels::nrm2(r0);  // beta_1
  if (c) ++c->inner_products;
  st.beta_curr = 0.0;
  st.j = 0;
  if (st.beta_next == 0.0) {
    if (c) c->vec_free(2);
    return std::nullopt;  // r0 = 0: already converged
  }
  return st;
}

LanczosEvent lanczos_step(LanczosState& st, const SparseSkewMatrix& s,
                          double threshold, OpCounters* c) {
  if (!(st.beta_next > threshold)) return LanczosEvent::lucky_breakdown;

  ++st.j;
  st.beta_curr = st.beta_next;
  // Buffer rotation: q_prev currently holds p_j, q_curr holds q_{j-1}.
  std::swap(st.q_curr, st.q_prev);
  kernels::scal(-1.0 / st.beta_curr, st.q_curr);  // q_j = -p_j / beta_j
  if (c) ++c->vector_updates;
  // p_{j+1} = S q_j - beta_j q_{j-1}, overwriting the q_{j-1} buffer.
  s.multiply_sub_inplace(st.q_curr, st.beta_curr, st.q_prev, c);
  st.beta_next = kernels::nrm2(st.q_prev);
  if (c) ++c->inner_products;
  return LanczosEvent::stepped;
}

double lanczos_breakdown_threshold(const SssOperator& a) {
  return a.size() * std::numeric_limits<double>::epsilon() * a.norm_estimate();
}

double ExtendedRitz::operator()(int row, int col) const {
  if (row < 0 || row > j || col < 0 || col >= j)
    throw std::out_of_range("extended Ritz index");
  if (row == col) return alpha;
  if (row == col - 1) return betas[static_cast<std::size_t>(col) - 1];  // beta_{col+1}
  if (row == col + 1) return -betas[static_cast<std::size_t>(col)];
  return 0.0;
}

std::vector<double> ExtendedRitz::dense() const {
  std::vector<double> m(static_cast<std::size_t>(j + 1) * j, 0.0);
  for (int r = 0; r <= j; ++r)
    for (int col = 0; col < j; ++col)
      m[static_cast<std::size_t>(r) * j + col] = (*this)(r, col);
  return m;
}

ExtendedRitz assemble_extended_ritz(double alpha, const std::vector<double>& betas) {
  if (betas.empty()) throw std::invalid_argument("extended Ritz needs at least one beta");
  ExtendedRitz t;
  t.j = static_cast<int>(betas.size());
  t.alpha = alpha;
  t.betas = betas;
  return t;
}

}  // namespace sss
