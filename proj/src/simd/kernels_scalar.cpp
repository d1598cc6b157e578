// Reference implementations. Plain loops, no reassociation tricks: this is
// the semantic baseline the vector backends are tested against.
#include <cmath>

#include "sitest/simd/kernels.hpp"

namespace sitest::simd {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void kernel_weights_scalar(KernelFn k, double u, const double* t,
                           std::size_t n, double inv_h, double* w) {
  switch (k) {
    case KernelFn::Quartic:
      for (std::size_t i = 0; i < n; ++i) {
        double z = (u - t[i]) * inv_h;
        double q = 1.0 - z * z;
        w[i] = q > 0.0 ? 0.9375 * q * q : 0.0;
      }
      break;
    case KernelFn::Epanechnikov:
      for (std::size_t i = 0; i < n; ++i) {
        double z = (u - t[i]) * inv_h;
        double q = 1.0 - z * z;
        w[i] = q > 0.0 ? 0.75 * q : 0.0;
      }
      break;
    case KernelFn::Gaussian:
      for (std::size_t i = 0; i < n; ++i) {
        double z = (u - t[i]) * inv_h;
        w[i] = kInvSqrt2Pi * std::exp(-0.5 * z * z);
      }
      break;
  }
}

double cvm_path_integral_scalar(const double* incr, std::size_t k) {
  double b = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    b += incr[j];
    acc += b * b;
  }
  // Trapezoid with B_0 = 0: sum B_j^2 for j < k plus B_k^2 / 2.
  return (acc - 0.5 * b * b) / static_cast<double>(k);
}

void zheng_pair_sums_scalar(const double* xt, std::size_t n, std::size_t p,
                            const double* e, double* num, double* den) {
  double acc_num = 0.0;
  double acc_den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ei = e[i];
    for (std::size_t j = i + 1; j < n; ++j) {
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
const Ops scalar_ops = {
    &sum_scalar,
    &dot_scalar,
    &kernel_weights_scalar,
    &cvm_path_integral_scalar,
    &zheng_pair_sums_scalar,
};
}  // namespace detail

}  // namespace sitest::simd
