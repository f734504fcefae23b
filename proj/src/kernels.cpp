#include "esjj/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace esjj::kernels {

namespace {

// Scalar reference implementations. Straight Neumaier loops; these define the
// semantics the SIMD variants are tested against.

inline void neumaier_step(double& s, double& c, double x) {
  double t = s + x;
  if (std::abs(s) >= std::abs(x))
    c += (s - t) + x;
  else
    c += (x - t) + s;
  s = t;
}

double s_sum(const double* a, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) neumaier_step(s, c, a[i]);
  return s + c;
}

double s_dot2(const double* a, const double* b, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) neumaier_step(s, c, a[i] * b[i]);
  return s + c;
}

double s_dot3(const double* a, const double* b, const double* cc, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) neumaier_step(s, c, a[i] * b[i] * cc[i]);
  return s + c;
}

double s_dot4(const double* a, const double* b, const double* cc, const double* d,
              std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) neumaier_step(s, c, a[i] * b[i] * cc[i] * d[i]);
  return s + c;
}

double s_dot2_rev(const double* a, const double* b, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) neumaier_step(s, c, a[i] * b[n - 1 - i]);
  return s + c;
}

const Backend k_scalar = {"scalar", s_sum, s_dot2, s_dot3, s_dot4, s_dot2_rev};

const Backend* pick() {
  const char* env = std::getenv("ESJJ_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return &k_scalar;
  if (const Backend* v = avx2_backend()) return v;
  return &k_scalar;
}

} // namespace

const Backend& scalar_backend() { return k_scalar; }

#if !defined(ESJJ_HAVE_AVX2_TU)
const Backend* avx2_backend() { return nullptr; }
#endif

const Backend& active_backend() {
  static const Backend* chosen = pick();
  return *chosen;
}

std::string active_backend_name() { return active_backend().name; }

} // namespace esjj::kernels
