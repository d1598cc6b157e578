#include "sitest/smooth.hpp"

#include <cmath>

namespace sitest {
namespace {

// Nearest sample index by |t_i - u|, ties toward the smaller index.
Eigen::Index nearest_index(const Vec& t, double u) {
  Eigen::Index best = 0;
  double bd = std::abs(t(0) - u);
  for (Eigen::Index i = 1; i < t.size(); ++i) {
    const double d = std::abs(t(i) - u);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

double resolve_bandwidth(const Vec& t, const KernelSpec& spec) {
  return spec.bandwidth > 0.0 ? spec.bandwidth : bandwidth_rule(t);
}

}  // namespace

simd::KernelFn kernel_fn(KernelFamily f) {
  switch (f) {
    case KernelFamily::Quartic: return simd::KernelFn::Quartic;
    case KernelFamily::Gaussian: return simd::KernelFn::Gaussian;
    case KernelFamily::Epanechnikov: return simd::KernelFn::Epanechnikov;
  }
  return simd::KernelFn::Quartic;
}

const char* kernel_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::Quartic: return "quartic";
    case KernelFamily::Gaussian: return "gaussian";
    case KernelFamily::Epanechnikov: return "epanechnikov";
  }
  return "quartic";
}

KernelFamily kernel_from_string(const std::string& s) {
  if (s == "quartic") return KernelFamily::Quartic;
  if (s == "gaussian") return KernelFamily::Gaussian;
  if (s == "epanechnikov") return KernelFamily::Epanechnikov;
  fail(ErrorCode::InvalidArgument, "unknown kernel '" + s + "'");
}

double bandwidth_rule(const Vec& t) {
  const Eigen::Index n = t.size();
  if (n < 2) fail(ErrorCode::DegenerateBandwidth, "bandwidth rule needs n >= 2");
  const double mean = t.mean();
  const double sd =
      std::sqrt((t.array() - mean).square().sum() / static_cast<double>(n - 1));
  const double h = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
  if (!(h > 0.0) || !std::isfinite(h))
    fail(ErrorCode::DegenerateBandwidth,
         "bandwidth rule degenerate (sd(t) = " + std::to_string(sd) + ")");
  return h;
}

Vec nw_estimate(const Vec& t, const Vec& z, const Vec& query,
                const KernelSpec& spec) {
  const Eigen::Index n = t.size();
  if (z.size() != n)
    fail(ErrorCode::InvalidArgument, "nw_estimate: t and z sizes differ");
  const double h = resolve_bandwidth(t, spec);
  const auto fn = kernel_fn(spec.family);
  Vec w(n), out(query.size());
  for (Eigen::Index q = 0; q < query.size(); ++q) {
    simd::kernel_weights(fn, query(q), t.data(), static_cast<std::size_t>(n),
                         1.0 / h, w.data());
    const double den = simd::sum(w.data(), static_cast<std::size_t>(n));
    if (den < 1e-12) {
      out(q) = z(nearest_index(t, query(q)));
    } else {
      out(q) =
          simd::dot(w.data(), z.data(), static_cast<std::size_t>(n)) / den;
    }
  }
  return out;
}

Mat nw_estimate_multi(const Vec& t, const Mat& z, const Vec& query,
                      const KernelSpec& spec) {
  const Eigen::Index n = t.size();
  if (z.rows() != n)
    fail(ErrorCode::InvalidArgument, "nw_estimate_multi: t and z sizes differ");
  const double h = resolve_bandwidth(t, spec);
  const auto fn = kernel_fn(spec.family);
  Vec w(n);
  Mat out(query.size(), z.cols());
  for (Eigen::Index q = 0; q < query.size(); ++q) {
    simd::kernel_weights(fn, query(q), t.data(), static_cast<std::size_t>(n),
                         1.0 / h, w.data());
    const double den = simd::sum(w.data(), static_cast<std::size_t>(n));
    if (den < 1e-12)
      out.row(q) = z.row(nearest_index(t, query(q)));
    else
      out.row(q) = (z.transpose() * w).transpose() / den;
  }
  return out;
}

Vec sigma2_estimate(const Vec& t, const Vec& resid, const Vec& query,
                    const KernelSpec& spec) {
  const Vec r2 = resid.array().square();
  const double floor =
      std::max(spec.variance_floor * r2.mean(), 1e-12);
  Vec v = nw_estimate(t, r2, query, spec);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(v(i) > floor) || !std::isfinite(v(i))) v(i) = floor;
  return v;
}

}  // namespace sitest
