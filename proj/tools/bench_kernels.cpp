// Timing comparison of the serial and OpenMP kernel backends on the
// advection matrix and the dense vector primitives.

#include <chrono>
#include <cstdio>
#include <random>

#include "sss/kernels.hpp"
#include "sss/problems.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(int reps, F&& f) {
  f();  // warm up
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) f();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  int n1 = 600, n2 = 600, reps = 50;
  if (argc > 1) n1 = n2 = std::atoi(argv[1]);
  if (argc > 2) reps = std::atoi(argv[2]);

  sss::AdvectionConfig cfg;
  cfg.n1 = n1;
  cfg.n2 = n2;
  cfg.gamma = 3.0;
  sss::SparseSkewMatrix s = sss::advection_matrix(cfg);
  const int n = cfg.dimension();

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  sss::Vector x(n), y(n), z(n);
  for (int i = 0; i < n; ++i) {
    x[i] = dist(gen);
    y[i] = dist(gen);
  }

  std::printf("n = %d (grid %d x %d), nnz = %lld, reps = %d\n", n, n1, n2,
              static_cast<long long>(s.nnz()), reps);

  struct Row {
    const char* name;
    double serial_ms;
    double par_ms;
  };
  Row rows[3];

  for (int pass = 0; pass < 2; ++pass) {
    sss::kernels::set_backend(pass == 0 ? sss::kernels::Backend::serial
                                        : sss::kernels::Backend::parallel);
    double* out[3] = {pass == 0 ? &rows[0].serial_ms : &rows[0].par_ms,
                      pass == 0 ? &rows[1].serial_ms : &rows[1].par_ms,
                      pass == 0 ? &rows[2].serial_ms : &rows[2].par_ms};
    rows[0].name = "spmv";
    *out[0] = time_ms(reps, [&] { s.multiply(x, z); });
    rows[1].name = "dot";
    volatile double sink = 0.0;
    *out[1] = time_ms(reps, [&] { sink = sink + sss::kernels::dot(x, y); });
    rows[2].name = "axpy";
    *out[2] = time_ms(reps, [&] { sss::kernels::axpy(1e-9, x, y); });
  }

  std::printf("%-6s %12s %12s %9s\n", "kernel", "serial (ms)", "openmp (ms)",
              "speedup");
  for (const Row& r : rows)
    std::printf("%-6s %12.4f %12.4f %8.2fx\n", r.name, r.serial_ms, r.par_ms,
                r.par_ms > 0.0 ? r.serial_ms / r.par_ms : 0.0);
  return 0;
}
