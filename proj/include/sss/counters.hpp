#pragma once

#include <algorithm>
#include <cstdint>

namespace sss {

// Work counters for a single solve. Counting conventions:
//  - matvecs: applications of S or A = alpha*I + S (a fused "S*q - beta*y"
//    kernel counts as one matvec, the subtraction is part of the sweep).
//  - vector_updates: axpy/scale class sweeps over length-n vectors. A fused
//    axpby that produces one output vector counts once.
//  - inner_products: dot/norm reductions over length-n vectors.
//  - peak_vectors: largest number of simultaneously live solver-owned
//    length-n work vectors, including the iterate x. The inputs b and x0
//    are not counted.
struct OpCounters {
  std::uint64_t matvecs = 0;
  std::uint64_t vector_updates = 0;
  std::uint64_t inner_products = 0;
  int live_vectors = 0;
  int peak_vectors = 0;

  void vec_alloc(int k = 1) {
    live_vectors += k;
    peak_vectors = std::max(peak_vectors, live_vectors);
  }
  void vec_free(int k = 1) { live_vectors -= k; }
};

// RAII registration of k solver-owned work vectors.
class ScopedVectors {
 public:
  ScopedVectors(OpCounters* c, int k) : c_(c), k_(k) {
    if (c_) c_->vec_alloc(k_);
  }
  ~ScopedVectors() {
    if (c_) c_->vec_free(k_);
  }
  ScopedVectors(const ScopedVectors&) = delete;
  ScopedVectors& operator=(const ScopedVectors&) = delete;

 private:
  OpCounters* c_;
  int k_;
};

}  // namespace sss
