// AVX2+FMA backend. Compiled with -mavx2 -mfma in this TU only; callers reach
// it through avx2_backend(), which returns nullptr unless cpuid says the host
// can run it. Per-lane Neumaier compensation mirrors the scalar reference, so
// the two backends agree to an ulp-level relative tolerance (not bitwise: the
// association order differs).

#include "esjj/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <immintrin.h>

namespace esjj::kernels {

namespace {

struct VAcc {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  inline void add(__m256d x) {
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d t = _mm256_add_pd(s, x);
    __m256d abs_s = _mm256_and_pd(s, absmask);
    __m256d abs_x = _mm256_and_pd(x, absmask);
    __m256d big_s = _mm256_cmp_pd(abs_s, abs_x, _CMP_GE_OQ);
    // (s - t) + x when |s| >= |x|, else (x - t) + s
    __m256d r1 = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    __m256d r2 = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(r2, r1, big_s));
    s = t;
  }

  // collapse lanes + scalar tail terms with one more Neumaier pass
  inline double finish(const double* tail, std::size_t nt) const {
    alignas(32) double ls[4], lc[4];
    _mm256_store_pd(ls, s);
    _mm256_store_pd(lc, c);
    double sum = 0.0, comp = 0.0;
    auto step = [&](double x) {
      double t = sum + x;
      if (std::abs(sum) >= std::abs(x))
        comp += (sum - t) + x;
      else
        comp += (x - t) + sum;
      sum = t;
    };
    for (int k = 0; k < 4; ++k) step(ls[k]);
    for (int k = 0; k < 4; ++k) step(lc[k]);
    for (std::size_t i = 0; i < nt; ++i) step(tail[i]);
    return sum + comp;
  }
};

double v_sum(const double* a, std::size_t n) {
  VAcc acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc.add(_mm256_loadu_pd(a + i));
  return acc.finish(a + i, n - i);
}

double v_dot2(const double* a, const double* b, std::size_t n) {
  VAcc acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc.add(_mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double tail[3];
  std::size_t nt = 0;
  for (; i < n; ++i) tail[nt++] = a[i] * b[i];
  return acc.finish(tail, nt);
}

double v_dot3(const double* a, const double* b, const double* c, std::size_t n) {
  VAcc acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc.add(_mm256_mul_pd(p, _mm256_loadu_pd(c + i)));
  }
  double tail[3];
  std::size_t nt = 0;
  for (; i < n; ++i) tail[nt++] = a[i] * b[i] * c[i];
  return acc.finish(tail, nt);
}

double v_dot4(const double* a, const double* b, const double* c, const double* d,
              std::size_t n) {
  VAcc acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    __m256d q = _mm256_mul_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(d + i));
    acc.add(_mm256_mul_pd(p, q));
  }
  double tail[3];
  std::size_t nt = 0;
  for (; i < n; ++i) tail[nt++] = a[i] * b[i] * c[i] * d[i];
  return acc.finish(tail, nt);
}

double v_dot2_rev(const double* a, const double* b, std::size_t n) {
  VAcc acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    // b[n-1-i .. n-4-i] is contiguous descending; load ascending and flip
    __m256d vb = _mm256_loadu_pd(b + (n - 4 - i));
    vb = _mm256_permute4x64_pd(vb, _MM_SHUFFLE(0, 1, 2, 3));
    acc.add(_mm256_mul_pd(va, vb));
  }
  double tail[3];
  std::size_t nt = 0;
  for (; i < n; ++i) tail[nt++] = a[i] * b[n - 1 - i];
  return acc.finish(tail, nt);
}

const Backend k_avx2 = {"avx2", v_sum, v_dot2, v_dot3, v_dot4, v_dot2_rev};

bool host_ok() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

} // namespace

const Backend* avx2_backend() {
  static const Backend* v = host_ok() ? &k_avx2 : nullptr;
  return v;
}

} // namespace esjj::kernels
