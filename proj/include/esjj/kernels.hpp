#pragma once

#include <cmath>
#include <cstddef>
#include <string>

// Reduction kernels for the mode-sum inner loops. Every series evaluation,
// quadrature coefficient, and Volterra correlation in the library funnels
// through these. Two backends: a scalar reference (always present) and an
// AVX2+FMA variant picked at runtime when the CPU supports it. Both use
// Neumaier-compensated accumulation so mode sums keep ~1 ulp error even when
// terms alternate in sign across four orders of magnitude.

namespace esjj::kernels {

struct Backend {
  const char* name;
  // sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
  // sum_i a[i]*b[i]
  double (*dot2)(const double* a, const double* b, std::size_t n);
  // sum_i a[i]*b[i]*c[i]
  double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
  // sum_i a[i]*b[i]*c[i]*d[i]
  double (*dot4)(const double* a, const double* b, const double* c, const double* d,
                 std::size_t n);
  // sum_{i<n} a[i]*b[n-1-i]   (correlation against a reversed window)
  double (*dot2_rev)(const double* a, const double* b, std::size_t n);
};

const Backend& scalar_backend();
// nullptr when the binary lacks the AVX2 TU or the CPU lacks AVX2/FMA.
const Backend* avx2_backend();

// Resolved once per process: AVX2 if available, else scalar.
// ESJJ_SIMD=scalar|avx2|auto overrides (avx2 silently degrades to scalar
// when unsupported, so test scripts can set it unconditionally).
const Backend& active_backend();
std::string active_backend_name();

inline double sum(const double* a, std::size_t n) { return active_backend().sum(a, n); }
inline double dot2(const double* a, const double* b, std::size_t n) {
  return active_backend().dot2(a, b, n);
}
inline double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  return active_backend().dot3(a, b, c, n);
}
inline double dot4(const double* a, const double* b, const double* c, const double* d,
                   std::size_t n) {
  return active_backend().dot4(a, b, c, d, n);
}
inline double dot2_rev(const double* a, const double* b, std::size_t n) {
  return active_backend().dot2_rev(a, b, n);
}

// Neumaier running accumulator; value() = sum + compensation.
struct Compensated {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

} // namespace esjj::kernels
