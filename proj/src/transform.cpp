#include "sitest/transform.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "sitest/nulldist.hpp"

namespace sitest {
namespace {

// Relative singular-value cutoff for the tail-matrix pseudo-inverse. For
// single-index families with elliptical covariates A(v) has rank 1 + d, so
// most of the empirical spectrum is kernel-regression noise; directions below
// this share of the top singular value are annihilated rather than inverted.
// Inverting them multiplies tail noise by 1/sigma_min and single compensator
// increments can then dwarf the whole process.
constexpr double kPinvRelCutoff = 1e-1;

struct Groups {
  Vec u;                    // unique projection values, ascending
  std::vector<int> count;   // multiplicity per value
  std::vector<int> start;   // offset of each group in the sort order
  std::vector<int> group_of;  // observation -> group
};

Groups make_groups(const ProjectionFrame& frame) {
  const Eigen::Index n = frame.t.size();
  Groups g;
  g.group_of.assign(static_cast<std::size_t>(n), 0);
  std::vector<double> vals;
  Eigen::Index i = 0;
  while (i < n) {
    const double v = frame.t(frame.order[static_cast<std::size_t>(i)]);
    Eigen::Index j = i;
    while (j < n && frame.t(frame.order[static_cast<std::size_t>(j)]) == v) {
      g.group_of[static_cast<std::size_t>(
          frame.order[static_cast<std::size_t>(j)])] =
          static_cast<int>(vals.size());
      ++j;
    }
    g.start.push_back(static_cast<int>(i));
    g.count.push_back(static_cast<int>(j - i));
    vals.push_back(v);
    i = j;
  }
  g.u = Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  return g;
}

// Order statistic quantile: smallest value with F_n >= prob.
double empirical_quantile(Vec sorted, double prob) {
  const Eigen::Index n = sorted.size();
  Eigen::Index idx = static_cast<Eigen::Index>(
      std::ceil(prob * static_cast<double>(n)));
  idx = std::max<Eigen::Index>(1, std::min(idx, n));
  return sorted(idx - 1);
}

// Acklam's rational approximation to the standard normal quantile
// (relative error < 1.2e-9; plenty for grid construction).
double inv_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  p = std::min(std::max(p, 1e-15), 1.0 - 1e-15);
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double halton(std::uint64_t idx, int base) {
  double f = 1.0, r = 0.0;
  while (idx > 0) {
    f /= base;
    r += f * static_cast<double>(idx % static_cast<std::uint64_t>(base));
    idx /= static_cast<std::uint64_t>(base);
  }
  return r;
}

int next_prime(int v) {
  for (int c = v + 1;; ++c) {
    bool prime = c >= 2;
    for (int f = 2; f * f <= c; ++f)
      if (c % f == 0) {
        prime = false;
        break;
      }
    if (prime) return c;
  }
}

}  // namespace

ProjectionFrame make_frame(const Mat& xs, const Mat& b, const Vec& alpha) {
  if (b.cols() != alpha.size() || b.rows() != xs.cols())
    fail(ErrorCode::InvalidArgument, "make_frame: dimension mismatch");
  if (std::abs(alpha.norm() - 1.0) > 1e-8)
    fail(ErrorCode::InvalidArgument, "make_frame: alpha must be unit length");
  if (alpha(0) < 0.0)
    fail(ErrorCode::InvalidArgument,
         "make_frame: alpha must have nonnegative first coordinate");
  ProjectionFrame f;
  f.alpha = alpha;
  f.t = xs * (b * alpha);
  const Eigen::Index n = f.t.size();
  f.order.resize(static_cast<std::size_t>(n));
  std::iota(f.order.begin(), f.order.end(), 0);
  std::sort(f.order.begin(), f.order.end(),
            [&](Eigen::Index a, Eigen::Index c) {
              return f.t(a) != f.t(c) ? f.t(a) < f.t(c) : a < c;
            });
  f.f_hat.resize(n);
  // ECDF with ties counted <=.
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j < n && f.t(f.order[static_cast<std::size_t>(j)]) ==
                        f.t(f.order[static_cast<std::size_t>(i)]))
      ++j;
    for (Eigen::Index r = i; r < j; ++r)
      f.f_hat(f.order[static_cast<std::size_t>(r)]) =
          static_cast<double>(j) / static_cast<double>(n);
    i = j;
  }
  return f;
}

double ProcessPath::eval(double x) const {
  const double* begin = u.data();
  const double* end = begin + u.size();
  const auto it = std::upper_bound(begin, end, x);
  if (it == begin) return 0.0;
  return value(static_cast<Eigen::Index>(it - begin) - 1);
}

ProcessPath residual_process(const ProjectionFrame& frame, const Vec& resid,
                             double x0) {
  const Eigen::Index n = frame.t.size();
  if (resid.size() != n)
    fail(ErrorCode::InvalidArgument, "residual_process: size mismatch");
  const Groups g = make_groups(frame);
  const double root_n = std::sqrt(static_cast<double>(n));
  ProcessPath path;
  std::vector<double> us, vals;
  double acc = 0.0;
  for (std::size_t gi = 0; gi < g.count.size(); ++gi) {
    for (int r = 0; r < g.count[gi]; ++r)
      acc += resid(frame.order[static_cast<std::size_t>(g.start[gi] + r)]);
    if (g.u(static_cast<Eigen::Index>(gi)) <= x0) {
      us.push_back(g.u(static_cast<Eigen::Index>(gi)));
      vals.push_back(acc / root_n);
    }
  }
  path.u = Eigen::Map<Vec>(us.data(), static_cast<Eigen::Index>(us.size()));
  path.value =
      Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  return path;
}

EmpiricalTransform empirical_transform(const Dataset& d,
                                       const SingleIndexModel& m,
                                       const FitResult& fit,
                                       const ProjectionFrame& frame, double x0,
                                       const TransformOptions& opts) {
  const Eigen::Index n = d.n();
  const Eigen::Index p = d.p();
  if (opts.spherical && m.d != 0)
    fail(ErrorCode::InvalidArgument,
         "spherical reduction requires a family without theta");
  const int k = opts.spherical ? 1 : static_cast<int>(p) + m.d;

  const double beta_norm = fit.beta.norm();
  if (!(beta_norm > 1e-12))
    fail(ErrorCode::NonIdentifiable, "fitted index direction is zero");
  const double kappa = 1.0 / beta_norm;

  const Groups g = make_groups(frame);
  const Eigen::Index mg = g.u.size();

  EmpiricalTransform tr;
  tr.k = k;
  tr.x0 = x0;
  tr.kappa = kappa;
  tr.u = g.u;
  tr.group_count = g.count;
  tr.group_of = g.group_of;
  tr.m_ret = std::upper_bound(g.u.data(), g.u.data() + mg, x0) - g.u.data();

  // Variance entering a(v) and the compensator.
  if (opts.variance_mode == VarianceMode::Smoothed) {
    tr.sigma2 = sigma2_estimate(frame.t, fit.residuals, g.u, opts.kernel);
  } else {
    const double s2 =
        std::max(fit.residuals.squaredNorm() / static_cast<double>(n), 1e-12);
    tr.sigma2 = Vec::Constant(mg, s2);
  }

  // a rows per unique value.
  tr.a.resize(mg, k);
  if (opts.spherical) {
    for (Eigen::Index gi = 0; gi < mg; ++gi) {
      const double v = g.u(gi) * beta_norm;  // u / kappa
      tr.a(gi, 0) = m.g1(v, fit.theta) * v / tr.sigma2(gi);
    }
  } else {
    const Mat r_n = nw_estimate_multi(frame.t, d.xs, g.u, opts.kernel);
    for (Eigen::Index gi = 0; gi < mg; ++gi) {
      const double v = g.u(gi) * beta_norm;
      tr.a.row(gi).head(p) = m.g1(v, fit.theta) * r_n.row(gi) / tr.sigma2(gi);
      if (m.d > 0)
        tr.a.row(gi).tail(m.d) =
            m.g2(v, fit.theta).transpose() / tr.sigma2(gi);
    }
  }

  // Score increments per observation, summed within tie groups.
  const Vec proj = d.xs * fit.beta;
  Mat wg = Mat::Zero(mg, k);
  for (Eigen::Index j = 0; j < n; ++j) {
    const int gi = g.group_of[static_cast<std::size_t>(j)];
    if (opts.spherical) {
      wg(gi, 0) += m.g1(proj(j), fit.theta) * proj(j);
    } else {
      wg.row(gi).head(p) += m.g1(proj(j), fit.theta) * d.xs.row(j);
      if (m.d > 0) wg.row(gi).tail(m.d) += m.g2(proj(j), fit.theta).transpose();
    }
  }

  tr.m_path.resize(mg, k);
  Eigen::RowVectorXd cum = Eigen::RowVectorXd::Zero(k);
  for (Eigen::Index gi = 0; gi < mg; ++gi) {
    cum += wg.row(gi);
    tr.m_path.row(gi) = cum / static_cast<double>(n);
  }

  // Tail matrices A_n(v) for retained values, accumulated right to left and
  // stored as pseudo-inverses. Singular directions below the relative cutoff
  // are annihilated rather than inverted.
  tr.a_tail.assign(static_cast<std::size_t>(tr.m_ret), Mat());
  Mat tail = Mat::Zero(k, k);
  for (Eigen::Index gi = mg - 1; gi >= 0; --gi) {
    tail.noalias() += tr.a.row(gi).transpose() * wg.row(gi);
    if (gi >= tr.m_ret) continue;
    const Mat a_v = tail / static_cast<double>(n);
    Eigen::JacobiSVD<Mat> svd(a_v,
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    const double smax = sv(0);
    if (!(smax > 0.0))
      fail(ErrorCode::TransformSingular,
           "tail matrix vanishes at u=" + std::to_string(g.u(gi)) +
               "; lower the x0 quantile");
    tr.diag.min_rcond = std::min(tr.diag.min_rcond, sv(k - 1) / smax);
    const double cutoff = kPinvRelCutoff * smax;
    Vec inv_sv(k);
    int dropped = 0;
    for (int c = 0; c < k; ++c) {
      if (sv(c) > cutoff) {
        inv_sv(c) = 1.0 / sv(c);
      } else {
        inv_sv(c) = 0.0;
        ++dropped;
        tr.diag.max_ridge = std::max(tr.diag.max_ridge, sv(c));
      }
    }
    if (dropped > 0) ++tr.diag.ridge_events;
    tr.a_tail[static_cast<std::size_t>(gi)] =
        svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
  }
  tr.diag.solves = static_cast<int>(tr.m_ret);
  return tr;
}

ProcessPath transform_process(const EmpiricalTransform& tr,
                              const ProjectionFrame& frame, const Vec& resid) {
  const Eigen::Index n = frame.t.size();
  if (resid.size() != n)
    fail(ErrorCode::InvalidArgument, "transform_process: size mismatch");
  const Eigen::Index mg = tr.u.size();
  const double root_n = std::sqrt(static_cast<double>(n));

  Vec ge = Vec::Zero(mg);
  for (Eigen::Index j = 0; j < n; ++j)
    ge(tr.group_of[static_cast<std::size_t>(j)]) += resid(j);

  // Inner tail integral S(v) = n^{-1/2} sum_{t_j >= v} a(t_j) e_j.
  Mat s_tail(tr.m_ret, tr.k);
  Vec suf = Vec::Zero(tr.k);
  for (Eigen::Index gi = mg - 1; gi >= 0; --gi) {
    suf += tr.a.row(gi).transpose() * ge(gi);
    if (gi < tr.m_ret) s_tail.row(gi) = suf.transpose() / root_n;
  }

  ProcessPath path;
  path.u = tr.u.head(tr.m_ret);
  path.value.resize(tr.m_ret);
  double v_acc = 0.0;
  double corr_acc = 0.0;
  for (Eigen::Index gi = 0; gi < tr.m_ret; ++gi) {
    v_acc += ge(gi);
    const Vec z = tr.a_tail[static_cast<std::size_t>(gi)] *
                  s_tail.row(gi).transpose();
    corr_acc += static_cast<double>(tr.group_count[static_cast<std::size_t>(
                    gi)]) /
                static_cast<double>(n) * tr.sigma2(gi) *
                tr.a.row(gi).dot(z);
    path.value(gi) = v_acc / root_n - corr_acc;
  }
  return path;
}

std::vector<Vec> direction_grid(int q, int resolution, StreamRng& rng) {
  if (q < 1) fail(ErrorCode::InvalidArgument, "direction_grid: q >= 1");
  if (resolution < 1)
    fail(ErrorCode::InvalidArgument, "direction_grid: resolution >= 1");
  std::vector<Vec> grid;
  if (q == 1) {
    Vec v(1);
    v << 1.0;
    grid.push_back(v);
    return grid;
  }
  if (q == 2) {
    grid.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
      const double ang = M_PI * static_cast<double>(i) /
                         static_cast<double>(resolution);
      Vec v(2);
      v << std::cos(ang), std::sin(ang);
      if (v(0) < 0.0) v = -v;
      grid.push_back(v);
    }
    return grid;
  }
  const int count = std::max(resolution, 32 * q);
  // Halton points pushed through the normal quantile give near-uniform
  // sphere coverage; the Cranley-Patterson shift ties the grid to the rng.
  std::vector<int> bases(static_cast<std::size_t>(q));
  int prime = 1;
  for (int j = 0; j < q; ++j) bases[static_cast<std::size_t>(j)] = prime = next_prime(prime);
  Vec shift(q);
  for (int j = 0; j < q; ++j) shift(j) = rng.next_unit();
  grid.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) {
    Vec v(q);
    for (int j = 0; j < q; ++j) {
      double u = halton(static_cast<std::uint64_t>(i),
                        bases[static_cast<std::size_t>(j)]) +
                 shift(j);
      u -= std::floor(u);
      v(j) = inv_normal_cdf(u);
    }
    const double nrm = v.norm();
    if (!(nrm > 1e-12)) continue;
    v /= nrm;
    if (v(0) < 0.0) v = -v;
    grid.push_back(v);
  }
  return grid;
}

TestReport wn_statistic(const Dataset& d, const SingleIndexModel& m,
                        const WnOptions& opts) {
  if (m.p != d.p())
    fail(ErrorCode::InvalidArgument, "model dimension does not match data");
  const Eigen::Index n = d.n();
  if (!(opts.x0_quantile > 0.0 && opts.x0_quantile <= 1.0))
    fail(ErrorCode::InvalidArgument, "x0 quantile must lie in (0, 1]");

  const FitResult fit = fit_model(d, m);
  const Vec& resid = fit.residuals;
  const double sigma2_hat =
      std::max(resid.squaredNorm() / static_cast<double>(n), 1e-12);
  const double beta_norm = fit.beta.norm();
  if (!(beta_norm > 1e-12))
    fail(ErrorCode::NonIdentifiable, "fitted index direction is zero");
  const double kappa = 1.0 / beta_norm;

  // Integration axis: projections on the unit fitted direction.
  const Vec s = (d.xs * fit.beta) * kappa;
  Vec s_sorted = s;
  std::sort(s_sorted.data(), s_sorted.data() + n);
  const double x0 = empirical_quantile(s_sorted, opts.x0_quantile);

  double psi_x0 = 0.0;
  Eigen::Index n_eval = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (s(i) <= x0) psi_x0 += resid(i) * resid(i);
  psi_x0 /= static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) n_eval += (s_sorted(i) <= x0) ? 1 : 0;
  const double f_x0 = static_cast<double>(n_eval) / static_cast<double>(n);

  const SdrEstimate sdr = sdr_estimate(d, opts.mrer_c);
  Mat b;
  int q_used = 0;
  if (opts.single_projection) {
    b = fit.beta / beta_norm;
    q_used = 1;
  } else {
    b = sdr.b;
    q_used = sdr.q;
    if (b.col(0).dot(fit.beta) < 0.0) b.col(0) = -b.col(0);
  }

  StreamRng grid_rng(opts.rng.child(0x67726964ull));  // "grid"
  const std::vector<Vec> grid =
      direction_grid(q_used, opts.grid_resolution, grid_rng);

  const Vec queries = s_sorted.head(n_eval);
  Vec sigma2_s;
  if (opts.variance_mode == VarianceMode::Smoothed)
    sigma2_s = sigma2_estimate(s, resid, queries, opts.kernel);

  TransformOptions topts;
  topts.kernel = opts.kernel;
  topts.variance_mode = opts.variance_mode;
  topts.spherical = opts.spherical;

  Vec best = Vec::Zero(n_eval);
  Vec alpha_star;
  double best_sq = -1.0;
  TransformDiagnostics diag;
  for (const Vec& alpha : grid) {
    const ProjectionFrame frame = make_frame(d.xs, b, alpha);
    const EmpiricalTransform tr =
        empirical_transform(d, m, fit, frame, x0, topts);
    const ProcessPath path = transform_process(tr, frame, resid);
    for (Eigen::Index i = 0; i < n_eval; ++i) {
      const double v = path.eval(queries(i));
      const double sq = v * v;
      if (sq > best(i)) best(i) = sq;
      if (sq > best_sq) {
        best_sq = sq;
        alpha_star = alpha;
      }
    }
    diag.min_rcond = std::min(diag.min_rcond, tr.diag.min_rcond);
    diag.max_ridge = std::max(diag.max_ridge, tr.diag.max_ridge);
    diag.ridge_events += tr.diag.ridge_events;
    diag.solves += tr.diag.solves;
  }
  if (alpha_star.size() == 0 && !grid.empty()) alpha_star = grid.front();

  double integral = 0.0;
  if (opts.variance_mode == VarianceMode::Smoothed) {
    for (Eigen::Index i = 0; i < n_eval; ++i) integral += best(i) * sigma2_s(i);
  } else {
    integral = best.sum();
  }
  integral /= static_cast<double>(n);

  double w2 = 0.0;
  if (opts.variance_mode == VarianceMode::Smoothed) {
    const double denom = std::max(psi_x0 * psi_x0, 1e-300);
    w2 = integral / denom;
  } else {
    w2 = integral / std::max(sigma2_hat * f_x0 * f_x0, 1e-300);
  }

  TestReport rep;
  rep.w2 = w2;
  rep.p_value = p_value(w2, embedded_null_table());
  rep.q_hat = sdr.q;
  rep.q_used = q_used;
  rep.beta = fit.beta;
  rep.theta = fit.theta;
  rep.kappa = kappa;
  rep.alpha_star = alpha_star;
  rep.x0 = x0;
  rep.f_x0 = f_x0;
  rep.psi_x0 = psi_x0;
  rep.sigma2_hat = sigma2_hat;
  rep.n_directions = static_cast<int>(grid.size());
  rep.n_eval = static_cast<int>(n_eval);
  rep.variance_mode = opts.variance_mode;
  rep.spherical = opts.spherical;
  rep.single_projection = opts.single_projection;
  rep.family = m.family_name();
  rep.kernel = kernel_name(opts.kernel.family);
  rep.x0_quantile = opts.x0_quantile;
  rep.grid_resolution = opts.grid_resolution;
  rep.diag = diag;
  rep.rng = opts.rng;
  rep.standardized = d.standardized;
  rep.center = d.center;
  rep.scale = d.scale;
  return rep;
}

}  // namespace sitest
