#include "sss/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sss {

bool all_finite(const Vector& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace kernels {

namespace {
#ifdef _OPENMP
std::atomic<Backend> g_backend{Backend::parallel};
#else
std::atomic<Backend> g_backend{Backend::serial};
#endif

// Below this length the parallel kernels fall through to the serial path;
// fork/join overhead dominates on short vectors.
constexpr std::size_t kParallelCutoff = 4096;
}  // namespace

void set_backend(Backend b) { g_backend.store(b, std::memory_order_relaxed); }
Backend backend() { return g_backend.load(std::memory_order_relaxed); }

namespace serial {

double dot(const Vector& x, const Vector& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double nrm2(const Vector& x) { return std::sqrt(dot(x, x)); }

void scal(double a, Vector& x) {
  for (double& v : x) v *= a;
}

void axpy(double a, const Vector& x, Vector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void axpby_into(double a, const Vector& x, double b, const Vector& y, Vector& out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
}

}  // namespace serial

namespace par {

#ifdef _OPENMP

double dot(const Vector& x, const Vector& y) {
  const std::size_t n = x.size();
  if (n < kParallelCutoff) return serial::dot(x, y);
  // Per-thread partials combined in thread order: reproducible for a fixed
  // thread count, unlike an unordered OpenMP reduction.
  const int nt = omp_get_max_threads();
  std::vector<double> partial(static_cast<std::size_t>(nt), 0.0);
#pragma omp parallel num_threads(nt)
  {
    const int t = omp_get_thread_num();
    double acc = 0.0;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      acc += x[i] * y[i];
    partial[static_cast<std::size_t>(t)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void scal(double a, Vector& x) {
  const std::size_t n = x.size();
  if (n < kParallelCutoff) return serial::scal(a, x);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) x[i] *= a;
}

void axpy(double a, const Vector& x, Vector& y) {
  const std::size_t n = x.size();
  if (n < kParallelCutoff) return serial::axpy(a, x, y);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) y[i] += a * x[i];
}

void axpby_into(double a, const Vector& x, double b, const Vector& y, Vector& out) {
  const std::size_t n = x.size();
  if (n < kParallelCutoff) return serial::axpby_into(a, x, b, y, out);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    out[i] = a * x[i] + b * y[i];
}

#else  // no OpenMP: the parallel entry points are the serial kernels

double dot(const Vector& x, const Vector& y) { return serial::dot(x, y); }
void scal(double a, Vector& x) { serial::scal(a, x); }
void axpy(double a, const Vector& x, Vector& y) { serial::axpy(a, x, y); }
void axpby_into(double a, const Vector& x, double b, const Vector& y, Vector& out) {
  serial::axpby_into(a, x, b, y, out);
}

#endif

double nrm2(const Vector& x) { return std::sqrt(par::dot(x, x)); }

}  // namespace par

double dot(const Vector& x, const Vector& y) {
  return backend() == Backend::parallel ? par::dot(x, y) : serial::dot(x, y);
}
double nrm2(const Vector& x) { return std::sqrt(dot(x, x)); }
void scal(double a, Vector& x) {
  backend() == Backend::parallel ? par::scal(a, x) : serial::scal(a, x);
}
void axpy(double a, const Vector& x, Vector& y) {
  backend() == Backend::parallel ? par::axpy(a, x, y) : serial::axpy(a, x, y);
}
void axpby_into(double a, const Vector& x, double b, const Vector& y, Vector& out) {
  backend() == Backend::parallel ? par::axpby_into(a, x, b, y, out)
                                 : serial::axpby_into(a, x, b, y, out);
}

}  // namespace kernels
}  // namespace sss
