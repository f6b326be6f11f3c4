#include "sss/mrs3.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sss {

GivensRotation givens_from(double yk, double yl) {
  if (yk == 0.0 && yl == 0.0) return {1.0, 0.0};
  const double r = std::hypot(yk, yl);
  return {yk / r, yl / r};
}

namespace {

bool is_zero_vector(const Vector& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

}  // namespace

SolveReport mrs3_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                       const Mrs3Options& opts, Mrs3Debug* debug) {
  const int n = a.size();
  if (static_cast<int>(b.size()) != n || static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("mrs3_solve: b/x0 dimension mismatch");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("mrs3_solve: tol must be > 0");
  if (opts.maxit < 1) throw std::invalid_argument("mrs3_solve: maxit must be >= 1");
  if (!all_finite(b) || !all_finite(x0))
    throw std::invalid_argument("mrs3_solve: non-finite input");

  SolveReport rep;
  OpCounters& C = rep.counters;

  const double b_norm = kernels::nrm2(b);
  ++C.inner_products;
  const double tau = convergence_threshold(opts.tol, b_norm);

  // Iterate; the only vector beyond the Lanczos pair and the W pair.
  rep.x = x0;
  C.vec_alloc(1);
  Vector& x = rep.x;

  Vector r0;
  if (is_zero_vector(x0)) {
    r0 = b;
  } else {
    a.apply(x0, r0, false, &C);
    kernels::axpby_into(1.0, b, -1.0, r0, r0);
    ++C.vector_updates;
  }

  auto lz = lanczos_init(r0, &C);
  r0 = Vector();  // p_1 lives inside the Lanczos buffers now
  const double beta1 = lz ? lz->beta_next : 0.0;
  rep.residual_history.push_back(beta1);
  if (debug) debug->r0_norm = beta1;

  if (!lz || beta1 <= tau) {
    rep.status = Status::converged;
    rep.iterations = 0;
    rep.true_final_residual = true_residual_norm(a, b, x);
    C.vec_free(lz ? 3 : 1);
    return rep;
  }

  const double bd_threshold = lanczos_breakdown_threshold(a);
  const double pivot_threshold = bd_threshold;

  Vector w_prev2(n, 0.0), w_prev1(n, 0.0);
  C.vec_alloc(2);  // 5 live in total: q pair, w pair, x

  GivensRotation g_jm2, g_jm1;  // G_{j-2}, G_{j-1}; identity at the start
  double eps = -beta1;          // v_0 = [-beta_1]
  int drift_extra = 0;
  rep.status = Status::max_iterations;

  for (int j = 1; j <= opts.maxit; ++j) {
    if (lanczos_step(*lz, a.s, bd_threshold, &C) == LanczosEvent::lucky_breakdown) {
      rep.true_final_residual = true_residual_norm(a, b, x);
      rep.status = rep.true_final_residual <= tau ? Status::converged : Status::exhausted;
      if (rep.status == Status::exhausted)
        rep.breakdown_detail = "Krylov space exhausted (beta below threshold)";
      rep.iterations = j - 1;
      C.vec_free(5);
      return rep;
    }

    const double beta_j = lz->beta_curr;
    const double beta_j1 = lz->beta_next;

    // Rotated column tail of u_j = [0_{j-2}, beta_j, alpha, -beta_{j+1}]:
    // window of positions j-2 .. j+1; u_j(k) = 0 for k <= 0.
    double e0 = 0.0;
    double e1 = (j >= 2) ? beta_j : 0.0;
    double e2 = a.alpha;
    double e3 = -beta_j1;
    g_jm2.apply(e0, e1);
    g_jm1.apply(e1, e2);
    const GivensRotation g_j = givens_from(e2, e3);
    g_j.apply(e2, e3);

    if (debug) {
      debug->betas.push_back(beta_j1);
      debug->rotations.push_back(g_j);
      debug->u_super2.push_back(e0);
      debug->u_super1.push_back(e1);
      debug->u_diag.push_back(e2);
      debug->u_below.push_back(e3);
      debug->q_cols.push_back(lz->q_curr);
    }

    if (std::abs(e2) <= pivot_threshold) {
      rep.status = Status::singular;
      rep.breakdown_detail = "rotated column diagonal u_j(j) vanished";
      rep.iterations = j - 1;
      rep.true_final_residual = true_residual_norm(a, b, x);
      C.vec_free(5);
      return rep;
    }

    // v-tail update: G_j applied to (eps_{j-1}, 0).
    const double mu = g_j.c * eps;
    eps = -g_j.s * eps;

    // w_j = (q_j - u_j(j-2) w_{j-2}) / u_j(j), into the w_{j-2} buffer.
    kernels::axpby_into(1.0 / e2, lz->q_curr, -e0 / e2, w_prev2, w_prev2);
    ++C.vector_updates;
    kernels::axpy(mu, w_prev2, x);
    ++C.vector_updates;
    std::swap(w_prev2, w_prev1);  // w_prev1 = w_j, w_prev2 = w_{j-1}

    if (debug) {
      debug->mus.push_back(mu);
      debug->w_cols.push_back(w_prev1);
    }

    g_jm2 = g_jm1;
    g_jm1 = g_j;

    rep.residual_history.push_back(std::abs(eps));
    rep.iterations = j;
    if (opts.audit_every > 0 && j % opts.audit_every == 0)
      rep.audited_residuals.emplace_back(j, true_residual_norm(a, b, x));

    if (std::abs(eps) <= tau) {
      // Confirm the recurred estimate with one uncounted true residual.
      const double tr = true_residual_norm(a, b, x);
      if (tr <= tau) {
        rep.status = Status::converged;
        rep.true_final_residual = tr;
        C.vec_free(5);
        return rep;
      }
      if (++drift_extra > 5) {
        rep.status = Status::estimate_drift;
        rep.true_final_residual = tr;
        rep.breakdown_detail = "recurred |eps| met the tolerance, true residual did not";
        C.vec_free(5);
        return rep;
      }
    }
  }

  rep.true_final_residual = true_residual_norm(a, b, x);
  C.vec_free(5);
  return rep;
}

std::optional<ZSequence> z_sequence(double alpha, const std::vector<double>& betas) {
  ZSequence zs;
  zs.z.reserve(betas.size() + 1);
  const double z1 = alpha * alpha;
  zs.z.push_back(z1);
  // Ratio form of the alternating-product recursion:
  //   Z_i = R_i + beta_i^2 with R_2 = Z_1, R_3 = Z_2, R_{i+1} = Z_1 Z_i / R_i.
  // (R_i is the product quotient; multiplying it out directly would overflow
  // for long beta sequences.)
  double r = z1;  // R_i while producing Z_i
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const int i = static_cast<int>(k) + 2;
    const double zi = r + betas[k] * betas[k];
    zs.z.push_back(zi);
    if (k + 1 < betas.size()) {
      if (i == 2) {
        r = zi;  // R_3 = Z_2 (base definition, no division)
      } else {
        if (r == 0.0) return std::nullopt;  // recursion denominator vanished
        r = z1 * zi / r;
      }
    }
  }
  return zs;
}

std::vector<double> recover_xi(const ExtendedRitz& ritz,
                               const std::vector<GivensRotation>& rotations,
                               double r0_norm) {
  const int j = ritz.j;
  if (static_cast<int>(rotations.size()) < j)
    throw std::invalid_argument("recover_xi: rotation history shorter than j");

  // Rotate the extended Ritz matrix column by column: G_k acts on rows
  // (k-1, k) in 0-based indexing.
  std::vector<std::vector<double>> u(static_cast<std::size_t>(j));
  for (int col = 0; col < j; ++col) {
    std::vector<double> y(static_cast<std::size_t>(j) + 1, 0.0);
    for (int row = 0; row <= j; ++row) y[row] = ritz(row, col);
    for (int k = 0; k < j; ++k) rotations[k].apply(y[k], y[k + 1]);
    u[col] = std::move(y);
  }

  std::vector<double> v(static_cast<std::size_t>(j) + 1, 0.0);
  v[0] = -r0_norm;
  for (int k = 0; k < j; ++k) rotations[k].apply(v[k], v[k + 1]);

  // Back-substitute U xi = v on the top j x j block.
  std::vector<double> xi(static_cast<std::size_t>(j), 0.0);
  for (int i = j - 1; i >= 0; --i) {
    double acc = v[i];
    for (int col = i + 1; col < j; ++col) acc -= u[col][i] * xi[col];
    const double diag = u[i][i];
    if (std::abs(diag) <= 1e-14 * std::abs(r0_norm))
      throw std::runtime_error("recover_xi: singular U_j");
    xi[i] = acc / diag;
  }
  return xi;
}

}  // namespace sss
