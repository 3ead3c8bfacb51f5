#include <cmath>

#include "dilatekit/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define DK_HAVE_X86 1
#endif

namespace dilatekit::simd::avx2 {

#ifdef DK_HAVE_X86

namespace {

__attribute__((target("avx2"))) inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

__attribute__((target("avx2"))) inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(s, _mm_unpackhi_pd(s, s)));
}

// |z|^2 for four complex values held in two registers; lane order is
// (z0, z2, z1, z3), which is irrelevant for sums and maxima.
__attribute__((target("avx2"))) inline __m256d norm2x4(__m256d a, __m256d b) {
  return _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
}

}  // namespace

__attribute__((target("avx2"))) double abs_sum(std::span<const cd> x) {
  const double* p = reinterpret_cast<const double*>(x.data());
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(p + 2 * i);
    const __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(norm2x4(a, b)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::sqrt(x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

__attribute__((target("avx2"))) double max_abs(std::span<const cd> x) {
  const double* p = reinterpret_cast<const double*>(x.data());
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(p + 2 * i);
    const __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
    acc = _mm256_max_pd(acc, norm2x4(a, b));
  }
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return std::sqrt(m);
}

__attribute__((target("avx2"))) double max_abs_diff(std::span<const cd> x, std::span<const cd> y) {
  const double* p = reinterpret_cast<const double*>(x.data());
  const double* q = reinterpret_cast<const double*>(y.data());
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(p + 2 * i), _mm256_loadu_pd(q + 2 * i));
    const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(p + 2 * i + 4), _mm256_loadu_pd(q + 2 * i + 4));
    acc = _mm256_max_pd(acc, norm2x4(a, b));
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double re = x[i].real() - y[i].real();
    const double im = x[i].imag() - y[i].imag();
    m = std::max(m, re * re + im * im);
  }
  return std::sqrt(m);
}

__attribute__((target("avx2"))) cd weighted_dot(std::span<const cd> x, std::span<const cd> y,
                                                std::span<const double> w) {
  const double* p = reinterpret_cast<const double*>(x.data());
  const double* q = reinterpret_cast<const double*>(y.data());
  const std::size_t n = x.size();
  // re lanes accumulate (xr yr, xi yi); im lanes accumulate (xr yi, xi yr).
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(p + 2 * i);
    const __m256d b = _mm256_loadu_pd(q + 2 * i);
    __m256d wv = _mm256_set1_pd(1.0);
    if (!w.empty()) wv = _mm256_setr_pd(w[i], w[i], w[i + 1], w[i + 1]);
    const __m256d bs = _mm256_permute_pd(b, 0b0101);
    acc_re = _mm256_add_pd(acc_re, _mm256_mul_pd(_mm256_mul_pd(a, b), wv));
    acc_im = _mm256_add_pd(acc_im, _mm256_mul_pd(_mm256_mul_pd(a, bs), wv));
  }
  alignas(32) double r[4], s[4];
  _mm256_store_pd(r, acc_re);
  _mm256_store_pd(s, acc_im);
  double re = (r[0] + r[1]) + (r[2] + r[3]);
  double im = (s[1] - s[0]) + (s[3] - s[2]);
  for (; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    re += (x[i].real() * y[i].real() + x[i].imag() * y[i].imag()) * wi;
    im += (x[i].imag() * y[i].real() - x[i].real() * y[i].imag()) * wi;
  }
  return {re, im};
}

#else

double abs_sum(std::span<const cd> x) { return scalar::abs_sum(x); }
double max_abs(std::span<const cd> x) { return scalar::max_abs(x); }
double max_abs_diff(std::span<const cd> x, std::span<const cd> y) { return scalar::max_abs_diff(x, y); }
cd weighted_dot(std::span<const cd> x, std::span<const cd> y, std::span<const double> w) {
  return scalar::weighted_dot(x, y, w);
}

#endif

}  // namespace dilatekit::simd::avx2
