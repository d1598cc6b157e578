// AVX2+FMA backend. Compiled with -mavx2 -mfma in its own translation unit;
// only reached through the dispatch table after a cpuid check.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "sitest/simd/kernels.hpp"

namespace sitest::simd {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

void kernel_weights_avx2(KernelFn k, double u, const double* t, std::size_t n,
                         double inv_h, double* w) {
  const __m256d vu = _mm256_set1_pd(u);
  const __m256d vih = _mm256_set1_pd(inv_h);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  switch (k) {
    case KernelFn::Quartic: {
      const __m256d c = _mm256_set1_pd(0.9375);
      for (; i + 4 <= n; i += 4) {
        __m256d z =
            _mm256_mul_pd(_mm256_sub_pd(vu, _mm256_loadu_pd(t + i)), vih);
        __m256d q = _mm256_fnmadd_pd(z, z, one);
        __m256d v = _mm256_mul_pd(c, _mm256_mul_pd(q, q));
        __m256d mask = _mm256_cmp_pd(q, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(w + i, _mm256_and_pd(v, mask));
      }
      for (; i < n; ++i) {
        double z = (u - t[i]) * inv_h;
        double q = 1.0 - z * z;
        w[i] = q > 0.0 ? 0.9375 * q * q : 0.0;
      }
      break;
    }
    case KernelFn::Epanechnikov: {
      const __m256d c = _mm256_set1_pd(0.75);
      for (; i + 4 <= n; i += 4) {
        __m256d z =
            _mm256_mul_pd(_mm256_sub_pd(vu, _mm256_loadu_pd(t + i)), vih);
        __m256d q = _mm256_fnmadd_pd(z, z, one);
        __m256d v = _mm256_mul_pd(c, q);
        __m256d mask = _mm256_cmp_pd(q, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(w + i, _mm256_and_pd(v, mask));
      }
      for (; i < n; ++i) {
        double z = (u - t[i]) * inv_h;
        double q = 1.0 - z * z;
        w[i] = q > 0.0 ? 0.75 * q : 0.0;
      }
      break;
    }
    case KernelFn::Gaussian: {
      // Vectorized argument, scalar exp: libm exp keeps the backends in
      // lockstep to the last few ulp.
      const __m256d half = _mm256_set1_pd(-0.5);
      for (; i + 4 <= n; i += 4) {
        __m256d z =
            _mm256_mul_pd(_mm256_sub_pd(vu, _mm256_loadu_pd(t + i)), vih);
        _mm256_storeu_pd(w + i, _mm256_mul_pd(half, _mm256_mul_pd(z, z)));
      }
      for (; i < n; ++i) {
        double z = (u - t[i]) * inv_h;
        w[i] = -0.5 * z * z;
      }
      for (std::size_t j = 0; j < n; ++j) w[j] = kInvSqrt2Pi * std::exp(w[j]);
      break;
    }
  }
}

double cvm_path_integral_avx2(const double* incr, std::size_t k) {
  __m256d acc = _mm256_setzero_pd();
  __m256d carry = _mm256_setzero_pd();
  const __m256d zero = _mm256_setzero_pd();
  std::size_t j = 0;
  double b_last = 0.0;
  for (; j + 4 <= k; j += 4) {
    __m256d x = _mm256_loadu_pd(incr + j);
    // In-register inclusive scan.
    __m256d s1 = _mm256_blend_pd(
        _mm256_permute4x64_pd(x, _MM_SHUFFLE(2, 1, 0, 0)), zero, 0x1);
    __m256d t = _mm256_add_pd(x, s1);
    __m256d s2 = _mm256_blend_pd(
        _mm256_permute4x64_pd(t, _MM_SHUFFLE(1, 0, 0, 0)), zero, 0x3);
    __m256d scan = _mm256_add_pd(t, s2);
    __m256d b = _mm256_add_pd(scan, carry);
    acc = _mm256_fmadd_pd(b, b, acc);
    carry = _mm256_permute4x64_pd(b, _MM_SHUFFLE(3, 3, 3, 3));
  }
  double acc_s = hsum(acc);
  b_last = _mm_cvtsd_f64(_mm256_castpd256_pd128(carry));
  for (; j < k; ++j) {
    b_last += incr[j];
    acc_s += b_last * b_last;
  }
  return (acc_s - 0.5 * b_last * b_last) / static_cast<double>(k);
}

void zheng_pair_sums_avx2(const double* xt, std::size_t n, std::size_t p,
                          const double* e, double* num, double* den) {
  double acc_num = 0.0;
  double acc_den = 0.0;
  double buf[4];
  for (std::size_t i = 0; i < n; ++i) {
    const double ei = e[i];
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      __m256d d2 = _mm256_setzero_pd();
      for (std::size_t c = 0; c < p; ++c) {
        __m256d xi = _mm256_set1_pd(xt[c * n + i]);
        __m256d xj = _mm256_loadu_pd(xt + c * n + j);
        __m256d dx = _mm256_sub_pd(xi, xj);
        d2 = _mm256_fmadd_pd(dx, dx, d2);
      }
      _mm256_storeu_pd(buf, d2);
      for (int lane = 0; lane < 4; ++lane) {
        const double term = std::exp(-0.5 * buf[lane]) * ei * e[j + lane];
        acc_num += term;
        acc_den += term * term;
      }
    }
    for (; j < n; ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < p; ++c) {
        const double dx = xt[c * n + i] - xt[c * n + j];
        d2 += dx * dx;
      }
      const double term = std::exp(-0.5 * d2) * ei * e[j];
      acc_num += term;
      acc_den += term * term;
    }
  }
  *num = acc_num;
  *den = acc_den;
}

}  // namespace

namespace detail {
const Ops avx2_ops = {
    &sum_avx2,
    &dot_avx2,
    &kernel_weights_avx2,
    &cvm_path_integral_avx2,
    &zheng_pair_sums_avx2,
};
}  // namespace detail

}  // namespace sitest::simd

#endif  // x86_64
