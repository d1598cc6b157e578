#pragma once

#include "sitest/dataset.hpp"
#include "sitest/fit.hpp"
#include "sitest/model.hpp"

namespace sitest {

// Kernel-smoothing lack-of-fit comparator: standardized degenerate
// U-statistic of residual products,
//   V = [n(n-1)]^{-1} sum_{i != j} K_h(x_i - x_j) e_i e_j,
// normal upper-tail p-value. Gaussian product kernel, per-coordinate
// bandwidths h_k = scale * sd_k * n^{-1/(4+p)}.
struct ZhengOptions {
  double bandwidth_scale = 0.75;
  std::optional<Vec> init_beta;
};

struct ZhengReport {
  double stat = 0.0;  // standardized statistic
  double p_value = 1.0;
  double u_stat = 0.0;
  double variance = 0.0;
  Vec bandwidth;
  Vec beta;
  Vec theta;
};

ZhengReport zheng_test(const Dataset& d, const SingleIndexModel& m,
                       const ZhengOptions& opts = {});

}  // namespace sitest
