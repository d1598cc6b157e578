#include "sitest/zheng.hpp"

#include <cmath>
#include <vector>

#include "sitest/simd/kernels.hpp"

namespace sitest {

ZhengReport zheng_test(const Dataset& d, const SingleIndexModel& m,
                       const ZhengOptions& opts) {
  const Eigen::Index n = d.n();
  const Eigen::Index p = d.p();
  if (n < 3) fail(ErrorCode::TooFewRows, "zheng_test: n >= 3 required");

  FitOptions fopts;
  fopts.init_beta = opts.init_beta;
  const FitResult fit = fit_model(d, m, fopts);

  // Per-coordinate bandwidths h_k = scale * sd_k * n^{-1/(4+p)}.
  const double rate = std::pow(static_cast<double>(n),
                               -1.0 / (4.0 + static_cast<double>(p)));
  Vec h(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const Vec col = d.xs.col(k);
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() /
                                static_cast<double>(n - 1));
    h(k) = opts.bandwidth_scale * sd * rate;
    if (!(h(k) > 0.0))
      fail(ErrorCode::DegenerateBandwidth,
           "zheng_test: zero-variance column " + std::to_string(k));
  }

  // Coordinate-major copy with bandwidths divided out; kernel and bandwidth
  // normalizing constants cancel in the studentized ratio.
  std::vector<double> xt(static_cast<std::size_t>(n * p));
  for (Eigen::Index k = 0; k < p; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      xt[static_cast<std::size_t>(k * n + i)] = d.xs(i, k) / h(k);

  double num = 0.0, den = 0.0;
  simd::zheng_pair_sums(xt.data(), static_cast<std::size_t>(n),
                        static_cast<std::size_t>(p), fit.residuals.data(),
                        &num, &den);
  if (!(den > 0.0))
    fail(ErrorCode::DegenerateResponse,
         "zheng_test: residual products vanish everywhere");

  ZhengReport rep;
  rep.stat = num / std::sqrt(den);
  rep.p_value = 0.5 * std::erfc(rep.stat / std::sqrt(2.0));
  rep.u_stat = 2.0 * num / (static_cast<double>(n) * static_cast<double>(n - 1));
  rep.variance = den;
  rep.bandwidth = h;
  rep.beta = fit.beta;
  rep.theta = fit.theta;
  return rep;
}

}  // namespace sitest
