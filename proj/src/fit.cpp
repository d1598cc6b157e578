#include "sitest/fit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "sitest/sdr.hpp"

namespace sitest {
namespace {

constexpr double kMaxDamping = 1e12;
constexpr double kMinDamping = 1e-12;

struct Eval {
  Vec resid;
  double sse = std::numeric_limits<double>::infinity();
  bool ok = false;
};

// SSE evaluation that treats domain overflow / non-finite values as a
// rejectable point instead of an error; the caller decides whether the
// failure is fatal (it is at the initial point).
Eval evaluate(const Dataset& d, const SingleIndexModel& m, const Vec& beta,
              const Vec& theta) {
  Eval e;
  const Vec t = d.xs * beta;
  e.resid.resize(d.n());
  try {
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      e.resid(i) = d.ys(i) - m.g(t(i), theta);
      if (!std::isfinite(e.resid(i))) return e;
    }
  } catch (const Error& err) {
    if (err.code() == ErrorCode::DomainError) return e;
    throw;
  }
  e.sse = e.resid.squaredNorm();
  e.ok = std::isfinite(e.sse);
  return e;
}

// Jacobian of the fitted values: row i is (g1(t_i) x_i', g2(t_i)').
Mat jacobian(const Dataset& d, const SingleIndexModel& m, const Vec& beta,
             const Vec& theta) {
  const Eigen::Index n = d.n();
  const Eigen::Index p = d.p();
  Mat j(n, p + m.d);
  const Vec t = d.xs * beta;
  for (Eigen::Index i = 0; i < n; ++i) {
    j.row(i).head(p) = m.g1(t(i), theta) * d.xs.row(i);
    if (m.d > 0) j.row(i).tail(m.d) = m.g2(t(i), theta).transpose();
  }
  return j;
}

struct Init {
  Vec beta;
  Vec theta;
};

Init closed_form_linear(const Dataset& d) {
  const Mat xtx = d.xs.transpose() * d.xs;
  const Vec xty = d.xs.transpose() * d.ys;
  Init init;
  init.beta = xtx.ldlt().solve(xty);
  init.theta = Vec(0);
  if (!init.beta.allFinite()) init.beta = Vec::Zero(d.p());
  return init;
}

// theta for a cubic index is linear given beta; solve it exactly.
Vec cubic_theta(const Dataset& d, const Vec& beta) {
  const Vec t = d.xs * beta;
  Mat v(d.n(), 4);
  v.col(0).setOnes();
  v.col(1) = t;
  v.col(2) = t.array().square();
  v.col(3) = t.array().cube();
  return (v.transpose() * v).ldlt().solve(v.transpose() * d.ys);
}

Init nonlinear_init(const Dataset& d, const SingleIndexModel& m,
                    const FitOptions& opts) {
  Vec dir;
  if (opts.init_beta) {
    dir = *opts.init_beta;
  } else {
    const DeeMatrix dee = dee_matrix(d);
    dir = dee.back_transform * dee.eigenvectors.col(0);
  }
  const double nrm = dir.norm();
  if (!(nrm > 0.0)) fail(ErrorCode::NonIdentifiable, "zero initial direction");
  dir /= nrm;

  Init best;
  double best_sse = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec& beta, const Vec& theta) {
    const Eval e = evaluate(d, m, beta, theta);
    if (e.ok && e.sse < best_sse) {
      best_sse = e.sse;
      best = Init{beta, theta};
    }
  };

  for (double sign : {1.0, -1.0}) {
    const Vec b = sign * dir;
    switch (m.family) {
      case Family::ExpIndex:
        for (double s : {0.25, 0.5, 1.0, 2.0}) consider(s * b, Vec(0));
        break;
      case Family::ScaledExponential: {
        const Vec t = d.xs * b;
        // Profile grid over the rate; the scale is linear given the rate.
        for (int gi = 0; gi <= 60; ++gi) {
          const double th2 = -3.0 + 0.1 * gi;
          if ((t.array() * th2).abs().maxCoeff() > 50.0) continue;
          const Vec e = (t.array() * th2).exp();
          const double ee = e.squaredNorm();
          if (!(ee > 1e-300)) continue;
          const double th1 = d.ys.dot(e) / ee;
          Vec theta(2);
          theta << th1, th2;
          consider(b, theta);
        }
        break;
      }
      case Family::CubicIndex:
        consider(b, cubic_theta(d, b));
        break;
      case Family::Linear:
        consider(b, Vec(0));
        break;
    }
  }
  if (!std::isfinite(best_sse))
    fail(ErrorCode::DomainError,
         "model family cannot be evaluated at any initial point");
  if (opts.init_theta) best.theta = *opts.init_theta;
  return best;
}

}  // namespace

FitResult fit_model(const Dataset& d, const SingleIndexModel& m,
                    const FitOptions& opts) {
  if (m.p != d.p())
    fail(ErrorCode::InvalidArgument, "model dimension does not match data");
  const Eigen::Index n = d.n();
  const Eigen::Index k = d.p() + m.d;
  if (n <= k + 2)
    fail(ErrorCode::TooFewRows, "fit needs n > p + d + 2");

  Init init;
  if (m.family == Family::Linear && !opts.init_beta) {
    init = closed_form_linear(d);
  } else {
    init = nonlinear_init(d, m, opts);
    if (opts.init_beta) init.beta = *opts.init_beta;
  }
  if (init.theta.size() != m.d && m.d > 0) init.theta = Vec::Zero(m.d);

  Vec beta = init.beta;
  Vec theta = init.theta;
  Eval cur = evaluate(d, m, beta, theta);
  if (!cur.ok)
    fail(ErrorCode::DomainError,
         "model family overflows at the initial parameters");

  FitResult out;
  out.sse_trace.push_back(cur.sse);
  double damping = opts.init_damping;
  bool converged = false;
  int iter = 0;
  bool solve_failed = false;

  for (; iter < opts.max_iter && !converged; ++iter) {
    const Mat j = jacobian(d, m, beta, theta);
    const Vec grad = j.transpose() * cur.resid;
    const Mat h = j.transpose() * j;
    const double hscale =
        std::max(h.trace() / static_cast<double>(k), 1e-300);

    bool accepted = false;
    solve_failed = false;
    while (damping <= kMaxDamping) {
      Mat hd = h;
      hd.diagonal().array() += damping * hscale;
      const Vec step = hd.ldlt().solve(grad);
      if (!step.allFinite()) {
        solve_failed = true;
        damping *= 10.0;
        continue;
      }
      const Vec nb = beta + step.head(d.p());
      const Vec nt = m.d > 0 ? Vec(theta + step.tail(m.d)) : Vec(0);
      const Eval cand = evaluate(d, m, nb, nt);
      if (cand.ok && cand.sse < cur.sse) {
        const double decrease = cur.sse - cand.sse;
        beta = nb;
        theta = nt;
        cur = cand;
        out.sse_trace.push_back(cur.sse);
        damping = std::max(damping / 10.0, kMinDamping);
        accepted = true;
        if (decrease <= opts.tol * (1.0 + cur.sse) ||
            step.norm() <= opts.tol * (1.0 + beta.norm() + theta.norm()))
          converged = true;
        break;
      }
      solve_failed = false;
      damping *= 10.0;
    }
    if (!accepted) {
      if (solve_failed)
        fail(ErrorCode::NonIdentifiable,
             "normal equations singular at maximal damping");
      // No descent direction left: treat the current point as the optimum.
      converged = true;
    }
  }

  const Mat j = jacobian(d, m, beta, theta);
  out.beta = beta;
  out.theta = theta;
  out.residuals = cur.resid;
  out.sse = cur.sse;
  out.grad_norm = (j.transpose() * cur.resid).norm();
  out.converged = converged;
  out.iterations = iter;
  return out;
}

}  // namespace sitest
