#include <atomic>
#include <cstdlib>
#include <cstring>

#include "sitest/common.hpp"
#include "sitest/simd/kernels.hpp"

namespace sitest::simd {
namespace {

using detail::Ops;

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* detect() {
  const char* env = std::getenv("SITEST_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return &detail::scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_available()) return &detail::avx2_ops;
#endif
  return &detail::scalar_ops;
}

std::atomic<const Ops*> g_ops{nullptr};

const Ops* ops() {
  const Ops* p = g_ops.load(std::memory_order_acquire);
  if (!p) {
    p = detect();
    g_ops.store(p, std::memory_order_release);
  }
  return p;
}

}  // namespace

Backend active_backend() {
  return ops() == &detail::scalar_ops ? Backend::Scalar : Backend::Avx2;
}

bool backend_supported(Backend b) {
  return b == Backend::Scalar || avx2_available();
}

void force_backend(Backend b) {
  if (!backend_supported(b))
    fail(ErrorCode::InvalidArgument, "requested SIMD backend not supported");
#if defined(__x86_64__) || defined(_M_X64)
  g_ops.store(b == Backend::Scalar ? &detail::scalar_ops : &detail::avx2_ops,
              std::memory_order_release);
#else
  g_ops.store(&detail::scalar_ops, std::memory_order_release);
#endif
}

const char* backend_name() {
  return active_backend() == Backend::Scalar ? "scalar" : "avx2";
}

double sum(const double* x, std::size_t n) { return ops()->sum(x, n); }

double dot(const double* x, const double* y, std::size_t n) {
  return ops()->dot(x, y, n);
}

void kernel_weights(KernelFn k, double u, const double* t, std::size_t n,
                    double inv_h, double* w) {
  ops()->kernel_weights(k, u, t, n, inv_h, w);
}

double cvm_path_integral(const double* incr, std::size_t k) {
  return ops()->cvm_path_integral(incr, k);
}

void zheng_pair_sums(const double* xt, std::size_t n, std::size_t p,
                     const double* e, double* num, double* den) {
  ops()->zheng_pair_sums(xt, n, p, e, num, den);
}

}  // namespace sitest::simd
