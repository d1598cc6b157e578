#pragma once

#include <optional>

#include "sitest/dataset.hpp"

namespace sitest {

// Discretized-response dimension reduction: average over sample points y_i of
// a two-slice candidate matrix for the binary response 1{Y <= y_i}, computed
// on whitened predictors. Each candidate combines the slice-mean
// (inverse-regression) matrix with a down-weighted slice-variance matrix so
// that directions entering only through even structure are still recovered.
struct DeeMatrix {
  Mat m;               // p x p, symmetric PSD, whitened coordinates
  Vec eigenvalues;     // descending
  Mat eigenvectors;    // orthonormal columns, whitened coordinates
  Mat back_transform;  // maps whitened directions to original coordinates
};

struct SdrEstimate {
  int q = 0;
  Mat b;  // p x q, orthonormal, original coordinates
  Vec eigenvalues;
  double mrer_c = 0.0;
};

DeeMatrix dee_matrix(const Dataset& d);

// Minimum-ratio eigenvalue criterion: argmin_i (l_{i+1}^2 + c)/(l_i^2 + c)
// with l_{p+1} = 0, negative estimates clamped to zero, ties toward the
// smallest i. Default c = log(n)/n.
int mrer(const Vec& eigenvalues_desc, double c);
double mrer_default_c(Eigen::Index n);

SdrEstimate sdr_estimate(const Dataset& d,
                         std::optional<double> c_override = std::nullopt);

}  // namespace sitest
