#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "sitest/dataset.hpp"
#include "sitest/fit.hpp"
#include "sitest/model.hpp"
#include "sitest/rng.hpp"
#include "sitest/sdr.hpp"
#include "sitest/smooth.hpp"

namespace sitest {

enum class VarianceMode { Homoscedastic, Smoothed };

// One projection direction alpha through the reduction basis b:
// t_i = alpha' b' x_i.
struct ProjectionFrame {
  Vec alpha;  // unit q-vector, alpha[0] >= 0
  Vec t;      // n projections, original observation order
  std::vector<Eigen::Index> order;  // indices sorting t ascending
  Vec f_hat;  // empirical CDF of t at each observation (ties counted <=)
};

ProjectionFrame make_frame(const Mat& xs, const Mat& b, const Vec& alpha);

// Right-continuous step path on the sorted unique projection values.
struct ProcessPath {
  Vec u;
  Vec value;
  // Step evaluation: value at the largest u_g <= x, 0 left of u[0].
  double eval(double x) const;
};

// Residual-marked empirical process V_n(u) = n^{-1/2} sum_i e_i 1{t_i <= u},
// evaluated on unique projection values up to x0.
ProcessPath residual_process(
    const ProjectionFrame& frame, const Vec& resid,
    double x0 = std::numeric_limits<double>::infinity());

struct TransformDiagnostics {
  double min_rcond = 1.0;  // smallest reciprocal condition over all A_n(v)
  double max_ridge = 0.0;  // largest singular value annihilated by a solve
  int ridge_events = 0;    // points where A_n(v) was rank-truncated
  int solves = 0;
};

// Ingredients of the innovation-martingale transform on one projection
// frame. All per-value arrays run over the sorted unique projection values;
// entries up to m_ret (values <= x0) additionally carry the pseudo-inverted
// tail matrix A_n and are where the compensator is accumulated.
//
//   a(v)   = ( g1(v/kappa, th) r_n(v) / s2(v) ; g2(v/kappa, th) / s2(v) )
//   w_j    = ( g1(b'x_j, th) x_j            ; g2(b'x_j, th) )
//   M_n(u) = n^{-1} sum_j w_j 1{t_j <= u}
//   A_n(v) = n^{-1} sum_j 1{t_j >= v} a(t_j) w_j'
//
// In spherical mode (d = 0 families only) the same structure holds with the
// scalar reductions a(v) = g1(v/kappa)(v/kappa)/s2(v), w_j = g1(b'x_j) b'x_j.
struct EmpiricalTransform {
  int k = 0;        // p + d (1 in spherical mode)
  double x0 = 0.0;  // truncation point
  double kappa = 0.0;
  Vec u;                        // m unique values, ascending
  std::vector<int> group_count;  // multiplicity of each value
  std::vector<int> group_of;     // observation -> unique-value index
  Eigen::Index m_ret = 0;        // #values with u_g <= x0
  Mat a;        // m x k
  Mat m_path;   // m x k, cumulative M_n
  Vec sigma2;   // m, variance estimate entering a and the compensator
  std::vector<Mat> a_tail;  // m_ret pseudo-inverses of A_n
  TransformDiagnostics diag;
};

struct TransformOptions {
  KernelSpec kernel;
  VarianceMode variance_mode = VarianceMode::Homoscedastic;
  bool spherical = false;
};

EmpiricalTransform empirical_transform(const Dataset& d,
                                       const SingleIndexModel& m,
                                       const FitResult& fit,
                                       const ProjectionFrame& frame, double x0,
                                       const TransformOptions& opts = {});

// T_n V_n on the retained grid: V_n(u) minus the accumulated compensator
//   n^{-1} sum_{t_i <= u} a(t_i)' A_n(t_i)^{-1} S(t_i) s2(t_i),
//   S(v) = n^{-1/2} sum_j 1{t_j >= v} a(t_j) e_j.
ProcessPath transform_process(const EmpiricalTransform& tr,
                              const ProjectionFrame& frame, const Vec& resid);

// Projection directions scanned for the sup. q = 1: {(1)}. q = 2: evenly
// spaced half-circle angles pi*k/resolution. q >= 3: max(resolution, 32q)
// Halton points mapped to the sphere with a seeded Cranley-Patterson shift.
// All vectors are canonicalized to first coordinate >= 0.
std::vector<Vec> direction_grid(int q, int resolution, StreamRng& rng);

struct WnOptions {
  KernelSpec kernel;
  double x0_quantile = 0.99;
  int grid_resolution = 64;
  VarianceMode variance_mode = VarianceMode::Homoscedastic;
  bool spherical = false;
  // Diagnostic mode: freeze the frame to the fitted index direction
  // beta/||beta|| instead of the estimated reduction basis.
  bool single_projection = false;
  std::optional<double> mrer_c;
  RngSpec rng;
};

struct TestReport {
  double w2 = 0.0;
  double p_value = 1.0;
  int q_hat = 0;   // estimated structural dimension
  int q_used = 0;  // dimension actually scanned (1 in single-projection mode)
  Vec beta;
  Vec theta;
  double kappa = 0.0;
  Vec alpha_star;  // direction attaining the largest squared path value
  double x0 = 0.0;
  double f_x0 = 0.0;      // F_n(x0)
  double psi_x0 = 0.0;    // n^{-1} sum e_i^2 1{s_i <= x0}
  double sigma2_hat = 0.0;
  int n_directions = 0;
  int n_eval = 0;  // integration points retained
  VarianceMode variance_mode = VarianceMode::Homoscedastic;
  bool spherical = false;
  bool single_projection = false;
  std::string family;
  std::string kernel;
  double x0_quantile = 0.99;
  int grid_resolution = 64;
  TransformDiagnostics diag;
  RngSpec rng;
  bool standardized = false;
  Vec center;
  Vec scale;
};

// Full adaptive test: fit, estimate the reduction frame, scan directions,
// transform, and integrate the squared sup-path up to x0. The p-value comes
// from the embedded null table.
TestReport wn_statistic(const Dataset& d, const SingleIndexModel& m,
                        const WnOptions& opts = {});

}  // namespace sitest
