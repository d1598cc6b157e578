#pragma once

#include <cstddef>

// Low-level numeric kernels with a scalar reference implementation and an
// AVX2 variant selected at runtime. The scalar path is the semantic
// reference; vector paths must agree within reduction-reassociation error
// and are equivalence-tested against it. Everything above this layer is
// backend-agnostic.
namespace sitest::simd {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
bool backend_supported(Backend b);
// Test hook; throws sitest::Error(InvalidArgument) if unsupported here.
void force_backend(Backend b);
const char* backend_name();

enum class KernelFn { Quartic = 0, Gaussian = 1, Epanechnikov = 2 };

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);

// w[i] = K((u - t[i]) * inv_h) for the given kernel family.
// Quartic: (15/16)(1-z^2)^2 on |z|<=1; Epanechnikov: (3/4)(1-z^2) on |z|<=1;
// Gaussian: exp(-z^2/2)/sqrt(2*pi).
void kernel_weights(KernelFn k, double u, const double* t, std::size_t n,
                    double inv_h, double* w);

// Trapezoid integral of B^2 over [0,1] where B is the cumulative sum of the
// k increments (a discretized Brownian path when incr ~ N(0, 1/k)).
double cvm_path_integral(const double* incr, std::size_t k);

// Pairwise Gaussian-product accumulation for the kernel U-statistic:
//   num = sum_{i<j} K_ij e_i e_j,  den = sum_{i<j} K_ij^2 e_i^2 e_j^2,
// K_ij = exp(-0.5 * sum_k (xt[k*n+i] - xt[k*n+j])^2) with xt coordinate-major
// (p rows of length n), bandwidths pre-divided out of xt.
void zheng_pair_sums(const double* xt, std::size_t n, std::size_t p,
                     const double* e, double* num, double* den);

namespace detail {
struct Ops {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*kernel_weights)(KernelFn, double, const double*, std::size_t, double,
                         double*);
  double (*cvm_path_integral)(const double*, std::size_t);
  void (*zheng_pair_sums)(const double*, std::size_t, std::size_t,
                          const double*, double*, double*);
};
extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
#endif
}  // namespace detail

}  // namespace sitest::simd
