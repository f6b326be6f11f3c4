#pragma once

#include <vector>

namespace sss {

using Vector = std::vector<double>;

bool all_finite(const Vector& x);

namespace kernels {

enum class Backend { serial, parallel };

// Process-wide kernel backend selection. Defaults to parallel when compiled
// with OpenMP, serial otherwise. The parallel reductions accumulate
// per-thread partial sums in thread order, so results are bitwise
// reproducible for a fixed thread count.
void set_backend(Backend b);
Backend backend();

double dot(const Vector& x, const Vector& y);
double nrm2(const Vector& x);
void scal(double a, Vector& x);
void axpy(double a, const Vector& x, Vector& y);  // y += a*x
// out = a*x + b*y; out may alias y but not x.
void axpby_into(double a, const Vector& x, double b, const Vector& y, Vector& out);

// Serial reference implementations, kept independent of the dispatch above
// so the parallel kernels can be validated against them.
namespace serial {
double dot(const Vector& x, const Vector& y);
double nrm2(const Vector& x);
void scal(double a, Vector& x);
void axpy(double a, const Vector& x, Vector& y);
void axpby_into(double a, const Vector& x, double b, const Vector& y, Vector& out);
}  // namespace serial

namespace par {
double dot(const Vector& x, const Vector& y);
double nrm2(const Vector& x);
void scal(double a, Vector& x);
void axpy(double a, const Vector& x, Vector& y);
void axpby_into(double a, const Vector& x, double b, const Vector& y, Vector& out);
}  // namespace par

}  // namespace kernels
}  // namespace sss
