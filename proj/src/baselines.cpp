#include "sss/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sss/mrs3.hpp"

namespace sss {

const char* to_string(Status s) {
  switch (s) {
    case Status::converged: return "Converged";
    case Status::max_iterations: return "MaxIterations";
    case Status::breakdown: return "Breakdown";
    case Status::stagnated: return "Stagnated";
    case Status::exhausted: return "Exhausted";
    case Status::singular: return "Singular";
    case Status::estimate_drift: return "EstimateDrift";
  }
  return "?";
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_inputs(const SssOperator& a, const Vector& b, const Vector& x0,
                  const SolveOptions& opts) {
  if (static_cast<int>(b.size()) != a.size() || static_cast<int>(x0.size()) != a.size())
    throw std::invalid_argument("solver: b/x0 dimension mismatch");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solver: tol must be > 0");
  if (opts.maxit < 1) throw std::invalid_argument("solver: maxit must be >= 1");
}

bool is_zero_vector(const Vector& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

// r = b - A x0, counted against c only when x0 != 0.
Vector initial_residual(const SssOperator& a, const Vector& b, const Vector& x0,
                        OpCounters& c) {
  if (is_zero_vector(x0)) return b;
  Vector r;
  a.apply(x0, r, false, &c);
  kernels::axpby_into(1.0, b, -1.0, r, r);
  ++c.vector_updates;
  return r;
}

// Residual improvement below 1e-14 relative over 50 consecutive iterations.
class StagnationWatch {
 public:
  explicit StagnationWatch(double r0) : best_(r0) {}
  bool update(double r) {
    if (r >= best_ * (1.0 - 1e-14)) {
      ++stall_;
    } else {
      stall_ = 0;
      best_ = r;
    }
    return stall_ >= 50;
  }

 private:
  double best_;
  int stall_ = 0;
};

void finish(SolveReport& rep, const SssOperator& a, const Vector& b) {
  rep.true_final_residual = true_residual_norm(a, b, rep.x);
}

}  // namespace

// -------------------------------------------------------------------------
// Truncated GCR (Orthomin(1)) and full GCR
// -------------------------------------------------------------------------

namespace {

SolveReport gcr_solve_impl(const SssOperator& a, const Vector& b, const Vector& x0,
                           const SolveOptions& opts, bool full) {
  check_inputs(a, b, x0, opts);
  const int n = a.size();
  SolveReport rep;
  OpCounters& C = rep.counters;

  const double b_norm = kernels::nrm2(b);
  ++C.inner_products;
  const double tau = convergence_threshold(opts.tol, b_norm);

  rep.x = x0;
  C.vec_alloc(1);
  Vector r = initial_residual(a, b, x0, C);
  C.vec_alloc(1);
  double rnorm = kernels::nrm2(r);
  ++C.inner_products;
  rep.residual_history.push_back(rnorm);
  if (rnorm <= tau) {
    rep.status = Status::converged;
    finish(rep, a, b);
    C.vec_free(2);
    return rep;
  }

  // Working directions. Truncated mode keeps one previous (s, v) pair; full
  // mode keeps them all.
  std::vector<Vector> s_hist, v_hist;
  Vector s_prev(n, 0.0), v_prev(n, 0.0);
  Vector s(n, 0.0), v(n, 0.0);
  C.vec_alloc(4);

  StagnationWatch watch(rnorm);
  std::string pending_gamma_detail;
  rep.status = Status::max_iterations;

  for (int j = 1; j <= opts.maxit; ++j) {
    s = r;
    ++C.vector_updates;
    a.apply(r, v, false, &C);

    if (full) {
      for (std::size_t i = 0; i < v_hist.size(); ++i) {
        const double coef = kernels::dot(v_hist[i], v);
        ++C.inner_products;
        kernels::axpy(-coef, s_hist[i], s);
        kernels::axpy(-coef, v_hist[i], v);
        C.vector_updates += 2;
      }
    } else {
      const double mu = kernels::dot(v_prev, v);
      ++C.inner_products;
      kernels::axpy(-mu, s_prev, s);
      kernels::axpy(-mu, v_prev, v);
      C.vector_updates += 2;
    }

    const double beta = kernels::nrm2(v);
    ++C.inner_products;
    if (beta <= 1e-12 * a.norm_estimate() * rnorm) {
      rep.status = Status::breakdown;
      rep.breakdown_detail = pending_gamma_detail.empty()
                                 ? "direction norm beta_j vanished"
                                 : pending_gamma_detail;
      rep.iterations = j;
      rep.residual_history.push_back(rnorm);  // r_j = r_{j-1} when gamma vanished
      finish(rep, a, b);
      C.vec_free(6);
      return rep;
    }
    kernels::scal(1.0 / beta, s);
    kernels::scal(1.0 / beta, v);
    C.vector_updates += 2;

    const double gamma = kernels::dot(r, v);
    ++C.inner_products;
    if (std::abs(gamma) <= 1e3 * kEps * rnorm)
      pending_gamma_detail = "gamma_" + std::to_string(j) +
                             " vanished; breakdown in the next iteration";

    kernels::axpy(gamma, s, rep.x);
    kernels::axpy(-gamma, v, r);
    C.vector_updates += 2;

    rnorm = kernels::nrm2(r);
    ++C.inner_products;
    rep.residual_history.push_back(rnorm);
    rep.iterations = j;
    if (opts.audit_every > 0 && j % opts.audit_every == 0)
      rep.audited_residuals.emplace_back(j, true_residual_norm(a, b, rep.x));

    if (full) {
      s_hist.push_back(s);
      v_hist.push_back(v);
      C.vec_alloc(2);
    } else {
      std::swap(s, s_prev);
      std::swap(v, v_prev);
    }

    if (rnorm <= tau) {
      const double tr = true_residual_norm(a, b, rep.x);
      if (tr <= tau) {
        rep.status = Status::converged;
        rep.true_final_residual = tr;
        C.vec_free(6 + 2 * static_cast<int>(v_hist.size()));
        return rep;
      }
    }
    if (watch.update(rnorm)) {
      rep.status = Status::stagnated;
      break;
    }
  }

  finish(rep, a, b);
  C.vec_free(6 + 2 * static_cast<int>(v_hist.size()));
  return rep;
}

}  // namespace

SolveReport trunc_gcr_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                            const SolveOptions& opts) {
  return gcr_solve_impl(a, b, x0, opts, /*full=*/false);
}

SolveReport full_gcr_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                           const SolveOptions& opts) {
  return gcr_solve_impl(a, b, x0, opts, /*full=*/true);
}

// -------------------------------------------------------------------------
// Generalized CG (three-term recurrence, H = alpha I)
// -------------------------------------------------------------------------

SolveReport gencg_solve(const SssOperator& a, const Vector& b,
                        const SolveOptions& opts) {
  Vector zero(b.size(), 0.0);
  check_inputs(a, b, zero, opts);
  if (a.alpha == 0.0)
    throw std::invalid_argument(
        "gencg_solve: alpha = 0 has no positive definite symmetric part");

  const int n = a.size();
  SolveReport rep;
  OpCounters& C = rep.counters;

  const double b_norm = kernels::nrm2(b);
  ++C.inner_products;
  const double tau = convergence_threshold(opts.tol, b_norm);

  // x_{-1} = x_0 = 0 as printed; alpha < 0 amounts to solving -A x = -b,
  // which only flips signs that cancel in the omega ratio, so the H = alpha I
  // specialization below covers both signs.
  rep.x.assign(n, 0.0);
  Vector x_prev(n, 0.0), v(n);
  C.vec_alloc(3);

  double rho_prev = 0.0, omega_prev = 1.0;
  StagnationWatch watch(b_norm);
  rep.status = Status::max_iterations;

  for (int j = 0; j <= opts.maxit; ++j) {
    a.apply(rep.x, v, false, &C);
    kernels::axpby_into(1.0, b, -1.0, v, v);  // v holds r_j = b - A x_j
    ++C.vector_updates;
    const double rnorm = kernels::nrm2(v);
    ++C.inner_products;
    rep.residual_history.push_back(rnorm);
    rep.iterations = j;
    if (opts.audit_every > 0 && j > 0 && j % opts.audit_every == 0)
      rep.audited_residuals.emplace_back(j, rnorm);
    if (rnorm <= tau) {
      rep.status = Status::converged;
      rep.true_final_residual = rnorm;
      C.vec_free(3);
      return rep;
    }
    if (j == opts.maxit) break;
    if (watch.update(rnorm)) {
      rep.status = Status::stagnated;
      break;
    }

    kernels::scal(1.0 / a.alpha, v);  // solve (alpha I) v_j = r_j
    ++C.vector_updates;
    // rho_j = (H v, v) = alpha * ||v||^2; only ratios enter omega, so the
    // alpha factor drops out.
    const double rho = (rnorm / a.alpha) * (rnorm / a.alpha);
    double omega;
    if (j == 0) {
      omega = 1.0;
    } else {
      if (rho_prev == 0.0 || omega_prev == 0.0) {
        rep.status = Status::breakdown;
        rep.breakdown_detail = "omega recurrence denominator vanished";
        break;
      }
      omega = 1.0 / (1.0 + (rho / rho_prev) / omega_prev);
    }

    // x_{j+1} = x_{j-1} + omega (v_j + x_j - x_{j-1})
    kernels::axpy(1.0, rep.x, v);
    kernels::axpy(-1.0, x_prev, v);
    C.vector_updates += 2;
    std::swap(rep.x, x_prev);  // x buffer now holds old x_{j-1}
    kernels::axpy(omega, v, rep.x);
    ++C.vector_updates;

    rho_prev = rho;
    omega_prev = omega;
  }

  finish(rep, a, b);
  C.vec_free(3);
  return rep;
}

// -------------------------------------------------------------------------
// CGW (preconditioned-CG shape with the negated beta, H = alpha I)
// -------------------------------------------------------------------------

SolveReport cgw_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                      const SolveOptions& opts) {
  check_inputs(a, b, x0, opts);
  if (a.alpha == 0.0)
    throw std::invalid_argument(
        "cgw_solve: alpha = 0 has no positive definite symmetric part");
  const int n = a.size();
  SolveReport rep;
  OpCounters& C = rep.counters;

  const double b_norm = kernels::nrm2(b);
  ++C.inner_products;
  const double tau = convergence_threshold(opts.tol, b_norm);

  rep.x = x0;
  C.vec_alloc(1);
  Vector r = initial_residual(a, b, x0, C);
  C.vec_alloc(1);
  double rr = kernels::dot(r, r);
  ++C.inner_products;
  rep.residual_history.push_back(std::sqrt(rr));
  if (std::sqrt(rr) <= tau) {
    rep.status = Status::converged;
    finish(rep, a, b);
    C.vec_free(2);
    return rep;
  }

  // z_j = r_j / alpha is eliminated; the 1/alpha factors cancel in alpha_j
  // and beta_j, surviving only in the search direction.
  Vector p(n), ap(n);
  kernels::axpby_into(1.0 / a.alpha, r, 0.0, r, p);  // p_0 = z_0
  ++C.vector_updates;
  C.vec_alloc(2);

  StagnationWatch watch(std::sqrt(rr));
  rep.status = Status::max_iterations;

  for (int j = 1; j <= opts.maxit; ++j) {
    a.apply(p, ap, false, &C);
    const double apr = kernels::dot(ap, r);  // (A p_j, z_j) * alpha
    ++C.inner_products;
    const double denom_scale = a.norm_estimate() * rr / std::abs(a.alpha);
    if (!std::isfinite(apr) || std::abs(apr) <= 1e3 * kEps * denom_scale) {
      rep.status = Status::breakdown;
      rep.breakdown_detail = "(A p_j, z_j) vanished";
      break;
    }
    const double alpha_j = rr / apr;
    kernels::axpy(alpha_j, p, rep.x);
    kernels::axpy(-alpha_j, ap, r);
    C.vector_updates += 2;
    const double rr_next = kernels::dot(r, r);
    ++C.inner_products;
    const double rnorm = std::sqrt(rr_next);
    rep.residual_history.push_back(rnorm);
    rep.iterations = j;
    if (opts.audit_every > 0 && j % opts.audit_every == 0)
      rep.audited_residuals.emplace_back(j, true_residual_norm(a, b, rep.x));

    if (rnorm <= tau) {
      const double tr = true_residual_norm(a, b, rep.x);
      if (tr <= tau) {
        rep.status = Status::converged;
        rep.true_final_residual = tr;
        C.vec_free(4);
        return rep;
      }
    }
    if (!std::isfinite(rnorm)) {
      rep.status = Status::breakdown;
      rep.breakdown_detail = "residual recurrence produced non-finite values";
      break;
    }
    if (watch.update(rnorm)) {
      rep.status = Status::stagnated;
      break;
    }

    const double beta_j = -rr_next / rr;  // the CGW sign
    kernels::axpby_into(1.0 / a.alpha, r, beta_j, p, p);
    ++C.vector_updates;
    rr = rr_next;
  }

  finish(rep, a, b);
  C.vec_free(4);
  return rep;
}

// -------------------------------------------------------------------------
// HWL (pure skew systems, explicit residual recomputation)
// -------------------------------------------------------------------------

SolveReport hwl_solve(const SparseSkewMatrix& s, const Vector& b, const Vector& x0,
                      const SolveOptions& opts) {
  SssOperator a(0.0, s);
  check_inputs(a, b, x0, opts);
  const int n = a.size();
  SolveReport rep;
  OpCounters& C = rep.counters;

  const double b_norm = kernels::nrm2(b);
  ++C.inner_products;
  const double tau = convergence_threshold(opts.tol, b_norm);

  rep.x = x0;
  Vector r = initial_residual(a, b, x0, C);
  double rnorm = kernels::nrm2(r);
  ++C.inner_products;
  rep.residual_history.push_back(rnorm);
  C.vec_alloc(2);
  if (rnorm <= tau) {
    rep.status = Status::converged;
    finish(rep, a, b);
    C.vec_free(2);
    return rep;
  }

  Vector p(n), ap(n), ar(n), a2p(n);
  s.multiply(r, p, &C);  // p_0 = A r_0
  C.vec_alloc(4);

  StagnationWatch watch(rnorm);
  rep.status = Status::max_iterations;

  for (int j = 1; j <= opts.maxit; ++j) {
    s.multiply(p, ap, &C);
    const double app = kernels::dot(ap, ap);
    ++C.inner_products;
    const double pp = kernels::dot(p, p);
    ++C.inner_products;
    if (app <= (1e3 * kEps * s.norm_inf()) * (1e3 * kEps * s.norm_inf()) * pp) {
      rep.status = Status::breakdown;
      rep.breakdown_detail = "(A p_j, A p_j) vanished";
      break;
    }
    const double alpha_j = kernels::dot(r, ap) / app;
    ++C.inner_products;
    kernels::axpy(alpha_j, p, rep.x);
    ++C.vector_updates;
    // r_{j+1} = b - A x_{j+1}, recomputed explicitly as published.
    s.multiply(rep.x, r, &C);
    kernels::axpby_into(1.0, b, -1.0, r, r);
    ++C.vector_updates;
    rnorm = kernels::nrm2(r);
    ++C.inner_products;
    rep.residual_history.push_back(rnorm);
    rep.iterations = j;
    if (opts.audit_every > 0 && j % opts.audit_every == 0)
      rep.audited_residuals.emplace_back(j, rnorm);
    if (rnorm <= tau) {
      rep.status = Status::converged;
      rep.true_final_residual = rnorm;
      C.vec_free(6);
      return rep;
    }
    if (watch.update(rnorm)) {
      rep.status = Status::stagnated;
      break;
    }

    s.multiply(r, ar, &C);
    s.multiply(ap, a2p, &C);
    const double beta_j = kernels::dot(a2p, ar) / app;
    ++C.inner_products;
    kernels::axpby_into(1.0, ar, beta_j, p, p);
    ++C.vector_updates;
  }

  finish(rep, a, b);
  C.vec_free(6);
  return rep;
}

// -------------------------------------------------------------------------
// CGNR (CG on the normal equations)
// -------------------------------------------------------------------------

SolveReport cgnr_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                       const SolveOptions& opts) {
  check_inputs(a, b, x0, opts);
  const int n = a.size();
  SolveReport rep;
  OpCounters& C = rep.counters;

  const double b_norm = kernels::nrm2(b);
  ++C.inner_products;
  const double tau = convergence_threshold(opts.tol, b_norm);

  rep.x = x0;
  C.vec_alloc(1);
  Vector r = initial_residual(a, b, x0, C);
  C.vec_alloc(1);
  double rnorm = kernels::nrm2(r);
  ++C.inner_products;
  rep.residual_history.push_back(rnorm);
  if (rnorm <= tau) {
    rep.status = Status::converged;
    finish(rep, a, b);
    C.vec_free(2);
    return rep;
  }

  Vector z(n), p(n), w(n);
  a.apply(r, z, /*transpose=*/true, &C);
  p = z;
  ++C.vector_updates;
  double zz = kernels::dot(z, z);
  ++C.inner_products;
  C.vec_alloc(3);

  StagnationWatch watch(rnorm);
  rep.status = Status::max_iterations;

  for (int j = 1; j <= opts.maxit; ++j) {
    a.apply(p, w, false, &C);
    const double ww = kernels::dot(w, w);
    ++C.inner_products;
    if (ww <= 0.0 || zz <= 0.0) {
      rep.status = Status::breakdown;
      rep.breakdown_detail = ww <= 0.0 ? "(A p_j, A p_j) vanished"
                                       : "(z_j, z_j) vanished";
      break;
    }
    const double alpha_j = zz / ww;
    kernels::axpy(alpha_j, p, rep.x);
    kernels::axpy(-alpha_j, w, r);
    C.vector_updates += 2;
    rnorm = kernels::nrm2(r);
    ++C.inner_products;
    rep.residual_history.push_back(rnorm);
    rep.iterations = j;
    if (opts.audit_every > 0 && j % opts.audit_every == 0)
      rep.audited_residuals.emplace_back(j, true_residual_norm(a, b, rep.x));
    if (rnorm <= tau) {
      const double tr = true_residual_norm(a, b, rep.x);
      if (tr <= tau) {
        rep.status = Status::converged;
        rep.true_final_residual = tr;
        C.vec_free(5);
        return rep;
      }
    }
    if (watch.update(rnorm)) {
      rep.status = Status::stagnated;
      break;
    }

    a.apply(r, z, /*transpose=*/true, &C);
    const double zz_next = kernels::dot(z, z);
    ++C.inner_products;
    const double beta_j = zz_next / zz;
    kernels::axpby_into(1.0, z, beta_j, p, p);
    ++C.vector_updates;
    zz = zz_next;
  }

  finish(rep, a, b);
  C.vec_free(5);
  return rep;
}

// -------------------------------------------------------------------------
// GMRES (Arnoldi + incremental Givens least squares, optional restart)
// -------------------------------------------------------------------------

SolveReport gmres_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                        const SolveOptions& opts, std::optional<int> restart) {
  check_inputs(a, b, x0, opts);
  if (restart && *restart < 1)
    throw std::invalid_argument("gmres_solve: restart must be >= 1");
  const int n = a.size();
  SolveReport rep;
  OpCounters& C = rep.counters;

  const double b_norm = kernels::nrm2(b);
  ++C.inner_products;
  const double tau = convergence_threshold(opts.tol, b_norm);

  rep.x = x0;
  C.vec_alloc(1);
  const int m = restart.value_or(opts.maxit);

  int total_it = 0;
  rep.status = Status::max_iterations;
  double last_norm = std::numeric_limits<double>::infinity();
  StagnationWatch watch(std::numeric_limits<double>::infinity());

  while (total_it < opts.maxit) {
    Vector r;
    a.apply(rep.x, r, false, &C);
    kernels::axpby_into(1.0, b, -1.0, r, r);
    ++C.vector_updates;
    const double beta = kernels::nrm2(r);
    ++C.inner_products;
    if (rep.residual_history.empty()) {
      rep.residual_history.push_back(beta);
      watch = StagnationWatch(beta);
    }
    if (beta <= tau) {
      rep.status = Status::converged;
      rep.true_final_residual = beta;
      C.vec_free(1);
      return rep;
    }

    std::vector<Vector> V;
    V.reserve(static_cast<std::size_t>(m) + 1);
    kernels::scal(1.0 / beta, r);
    ++C.vector_updates;
    V.push_back(std::move(r));
    C.vec_alloc(1);

    std::vector<std::vector<double>> R;  // triangularized Hessenberg columns
    std::vector<GivensRotation> rot;
    std::vector<double> g{beta};

    int k = 0;
    bool happy = false;
    for (; k < m && total_it < opts.maxit; ++k) {
      Vector w;
      a.apply(V[k], w, false, &C);
      std::vector<double> h(static_cast<std::size_t>(k) + 2, 0.0);
      for (int i = 0; i <= k; ++i) {
        h[i] = kernels::dot(V[i], w);
        ++C.inner_products;
        kernels::axpy(-h[i], V[i], w);
        ++C.vector_updates;
      }
      h[k + 1] = kernels::nrm2(w);
      ++C.inner_products;

      for (int i = 0; i < k; ++i) rot[i].apply(h[i], h[i + 1]);
      const GivensRotation gk = givens_from(h[k], h[k + 1]);
      gk.apply(h[k], h[k + 1]);
      rot.push_back(gk);
      g.push_back(0.0);
      gk.apply(g[k], g[k + 1]);
      h.resize(static_cast<std::size_t>(k) + 1);
      R.push_back(std::move(h));

      ++total_it;
      last_norm = std::abs(g[k + 1]);
      rep.residual_history.push_back(last_norm);
      rep.iterations = total_it;

      const double happy_tol = n * kEps * a.norm_estimate();
      const double next_h = kernels::nrm2(w);  // already counted above
      if (next_h > happy_tol) {
        kernels::scal(1.0 / next_h, w);
        ++C.vector_updates;
        V.push_back(std::move(w));
        C.vec_alloc(1);
      } else {
        happy = true;  // Arnoldi breakdown: the solution is in the span
        ++k;
        break;
      }
      if (last_norm <= tau) {
        ++k;
        break;
      }
    }

    // y = R^{-1} g on the k x k triangle, x += V y.
    std::vector<double> y(static_cast<std::size_t>(k), 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double acc = g[i];
      for (int col = i + 1; col < k; ++col) acc -= R[col][i] * y[col];
      if (R[i][i] == 0.0) {
        rep.status = Status::breakdown;
        rep.breakdown_detail = "singular triangular factor";
        finish(rep, a, b);
        C.vec_free(1 + static_cast<int>(V.size()));
        return rep;
      }
      y[i] = acc / R[i][i];
    }
    for (int i = 0; i < k; ++i) {
      kernels::axpy(y[i], V[i], rep.x);
      ++C.vector_updates;
    }
    C.vec_free(static_cast<int>(V.size()));

    if (last_norm <= tau || happy) {
      const double tr = true_residual_norm(a, b, rep.x);
      if (tr <= tau) {
        rep.status = Status::converged;
        rep.true_final_residual = tr;
        C.vec_free(1);
        return rep;
      }
      if (happy) {
        rep.status = Status::exhausted;
        rep.true_final_residual = tr;
        C.vec_free(1);
        return rep;
      }
    }
    if (opts.audit_every > 0)
      rep.audited_residuals.emplace_back(total_it, true_residual_norm(a, b, rep.x));
    if (watch.update(last_norm)) {
      rep.status = Status::stagnated;
      break;
    }
  }

  finish(rep, a, b);
  C.vec_free(1);
  return rep;
}

// -------------------------------------------------------------------------
// Bi-CGSTAB (classical recurrence)
// -------------------------------------------------------------------------

SolveReport bicgstab_solve(const SssOperator& a, const Vector& b, const Vector& x0,
                           const SolveOptions& opts) {
  check_inputs(a, b, x0, opts);
  const int n = a.size();
  SolveReport rep;
  OpCounters& C = rep.counters;

  const double b_norm = kernels::nrm2(b);
  ++C.inner_products;
  const double tau = convergence_threshold(opts.tol, b_norm);

  rep.x = x0;
  C.vec_alloc(1);
  Vector r = initial_residual(a, b, x0, C);
  C.vec_alloc(1);
  double rnorm = kernels::nrm2(r);
  ++C.inner_products;
  rep.residual_history.push_back(rnorm);
  if (rnorm <= tau) {
    rep.status = Status::converged;
    finish(rep, a, b);
    C.vec_free(2);
    return rep;
  }

  Vector rhat = r;
  Vector p(n, 0.0), v(n, 0.0), s(n), t(n);
  C.vec_alloc(5);

  double rho = 1.0, alpha = 1.0, omega = 1.0;
  StagnationWatch watch(rnorm);
  rep.status = Status::max_iterations;

  for (int j = 1; j <= opts.maxit; ++j) {
    const double rho_next = kernels::dot(rhat, r);
    ++C.inner_products;
    if (std::abs(rho_next) <= kEps * kEps * b_norm * b_norm) {
      rep.status = Status::breakdown;
      rep.breakdown_detail = "rho = (rhat, r_j) vanished";
      break;
    }
    const double beta = (rho_next / rho) * (alpha / omega);
    // p = r + beta (p - omega v)
    kernels::axpy(-omega, v, p);
    kernels::axpby_into(1.0, r, beta, p, p);
    C.vector_updates += 2;
    a.apply(p, v, false, &C);
    const double rhat_v = kernels::dot(rhat, v);
    ++C.inner_products;
    if (std::abs(rhat_v) <= kEps * kEps * b_norm * b_norm) {
      rep.status = Status::breakdown;
      rep.breakdown_detail = "(rhat, A p_j) vanished";
      break;
    }
    alpha = rho_next / rhat_v;
    kernels::axpby_into(1.0, r, -alpha, v, s);
    ++C.vector_updates;
    a.apply(s, t, false, &C);
    const double tt = kernels::dot(t, t);
    ++C.inner_products;
    if (tt == 0.0) {
      // s is already the exact residual of x + alpha p.
      kernels::axpy(alpha, p, rep.x);
      ++C.vector_updates;
      r = s;
      rnorm = kernels::nrm2(r);
      ++C.inner_products;
      rep.residual_history.push_back(rnorm);
      rep.iterations = j;
      rep.status = rnorm <= tau ? Status::converged : Status::breakdown;
      if (rep.status == Status::breakdown)
        rep.breakdown_detail = "omega denominator (t, t) vanished";
      break;
    }
    omega = kernels::dot(t, s) / tt;
    ++C.inner_products;
    kernels::axpy(alpha, p, rep.x);
    kernels::axpy(omega, s, rep.x);
    C.vector_updates += 2;
    kernels::axpby_into(1.0, s, -omega, t, r);
    ++C.vector_updates;
    rnorm = kernels::nrm2(r);
    ++C.inner_products;
    rep.residual_history.push_back(rnorm);
    rep.iterations = j;
    if (opts.audit_every > 0 && j % opts.audit_every == 0)
      rep.audited_residuals.emplace_back(j, true_residual_norm(a, b, rep.x));

    if (!std::isfinite(rnorm)) {
      rep.status = Status::breakdown;
      rep.breakdown_detail = "recurrence produced non-finite values";
      break;
    }
    if (rnorm <= tau) {
      const double tr = true_residual_norm(a, b, rep.x);
      if (tr <= tau) {
        rep.status = Status::converged;
        rep.true_final_residual = tr;
        C.vec_free(7);
        return rep;
      }
    }
    if (std::abs(omega) <= kEps * kEps) {
      rep.status = Status::breakdown;
      rep.breakdown_detail = "omega vanished";
      break;
    }
    if (watch.update(rnorm)) {
      rep.status = Status::stagnated;
      break;
    }
    rho = rho_next;
  }

  finish(rep, a, b);
  C.vec_free(7);
  return rep;
}

}  // namespace sss
