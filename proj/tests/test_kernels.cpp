#include <cmath>
#include <random>

#include "doctest.h"
#include "sss/kernels.hpp"

using namespace sss;

namespace {

Vector random_vec(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

struct BackendGuard {
  kernels::Backend saved = kernels::backend();
  ~BackendGuard() { kernels::set_backend(saved); }
};

}  // namespace

TEST_CASE("dot matches a plain loop") {
  BackendGuard guard;
  const Vector x = random_vec(1000, 1), y = random_vec(1000, 2);
  long double ref = 0.0;
  for (int i = 0; i < 1000; ++i) ref += static_cast<long double>(x[i]) * y[i];
  for (auto be : {kernels::Backend::serial, kernels::Backend::parallel}) {
    kernels::set_backend(be);
    CHECK(kernels::dot(x, y) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
  }
}

TEST_CASE("nrm2 of a unit basis vector is 1") {
  Vector e(100, 0.0);
  e[37] = 1.0;
  CHECK(kernels::nrm2(e) == 1.0);
}

TEST_CASE("axpy, scal, axpby_into elementwise") {
  BackendGuard guard;
  for (auto be : {kernels::Backend::serial, kernels::Backend::parallel}) {
    kernels::set_backend(be);
    Vector x = {1.0, -2.0, 3.0};
    Vector y = {10.0, 20.0, 30.0};
    kernels::axpy(2.0, x, y);
    CHECK(y[0] == 12.0);
    CHECK(y[1] == 16.0);
    CHECK(y[2] == 36.0);
    kernels::scal(0.5, y);
    CHECK(y[0] == 6.0);
    Vector out(3);
    kernels::axpby_into(1.0, x, -1.0, y, out);
    CHECK(out[0] == 1.0 - 6.0);
    // aliased output is supported
    kernels::axpby_into(2.0, y, 0.0, y, y);
    CHECK(y[0] == 12.0);
  }
}

TEST_CASE("parallel kernels are run-to-run deterministic and near the serial result") {
  BackendGuard guard;
  const int n = 100'000;  // above the parallel cutoff
  const Vector x = random_vec(n, 3), y = random_vec(n, 4);

  kernels::set_backend(kernels::Backend::parallel);
  const double d1 = kernels::dot(x, y);
  const double d2 = kernels::dot(x, y);
  CHECK(d1 == d2);

  kernels::set_backend(kernels::Backend::serial);
  const double ds = kernels::dot(x, y);
  CHECK(d1 == doctest::Approx(ds).epsilon(1e-12));

  kernels::set_backend(kernels::Backend::parallel);
  CHECK(kernels::nrm2(x) == doctest::Approx(std::sqrt(kernels::dot(x, x))).epsilon(1e-14));
}

TEST_CASE("all_finite flags inf and nan") {
  Vector v = {1.0, 2.0};
  CHECK(all_finite(v));
  v[1] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(all_finite(v));
  v[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(all_finite(v));
}
