#pragma once

#include "sitest/common.hpp"
#include "sitest/simd/kernels.hpp"

namespace sitest {

enum class KernelFamily { Quartic, Gaussian, Epanechnikov };

struct KernelSpec {
  KernelFamily family = KernelFamily::Quartic;
  // <= 0 means "apply bandwidth_rule to the running variable".
  double bandwidth = 0.0;
  // Relative variance floor: sigma2 estimates are clamped below at
  // variance_floor * mean(resid^2) (with a 1e-12 absolute guard).
  double variance_floor = 0.05;
};

// h = 1.06 * sd(t) * n^(-1/5). DegenerateBandwidth if sd(t) == 0.
double bandwidth_rule(const Vec& t);

// Nadaraya-Watson estimate of E[z | t = u] at each query point. When the
// local weight mass is below 1e-12 the value falls back to z at the nearest
// sample point.
Vec nw_estimate(const Vec& t, const Vec& z, const Vec& query,
                const KernelSpec& spec);
// Column-wise version for vector-valued targets (z is n x k).
Mat nw_estimate_multi(const Vec& t, const Mat& z, const Vec& query,
                      const KernelSpec& spec);

// Conditional variance proxy: NW smooth of squared residuals, clamped below
// at the variance floor so downstream divisions stay stable.
Vec sigma2_estimate(const Vec& t, const Vec& resid, const Vec& query,
                    const KernelSpec& spec);

simd::KernelFn kernel_fn(KernelFamily f);
const char* kernel_name(KernelFamily f);
KernelFamily kernel_from_string(const std::string& s);

}  // namespace sitest
