#pragma once

#include <optional>
#include <vector>

#include "sitest/dataset.hpp"
#include "sitest/model.hpp"

namespace sitest {

struct FitOptions {
  int max_iter = 200;
  double tol = 1e-10;          // relative SSE decrease / step-norm threshold
  double init_damping = 1e-3;  // ridge factor; x10 on reject, /10 on accept
  std::optional<Vec> init_beta;
  std::optional<Vec> init_theta;
};

struct FitResult {
  Vec beta;   // p
  Vec theta;  // d
  Vec residuals;
  double sse = 0.0;
  double grad_norm = 0.0;  // ||J' r|| at the final iterate
  bool converged = false;
  int iterations = 0;
  std::vector<double> sse_trace;  // SSE after each accepted step
};

// Nonlinear least squares for y = g(beta' x, theta) + e by damped
// Gauss-Newton. The linear family is initialized at the closed-form normal
// equations; nonlinear families at the leading dimension-reduction direction
// (both signs) with theta from a one-dimensional profile grid.
// NonIdentifiable if the damped normal equations stay singular at maximal
// damping; DomainError if g overflows at the initial point.
FitResult fit_model(const Dataset& d, const SingleIndexModel& m,
                    const FitOptions& opts = {});

}  // namespace sitest
