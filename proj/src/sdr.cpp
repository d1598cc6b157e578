#include "sitest/sdr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace sitest {
namespace {

// Weight of the variance-based (SAVE) slice matrix added to the slice-mean
// (SIR) matrix in each per-cut candidate. Slice means alone cannot see
// directions that enter the regression through even functions (a symmetric
// quadratic leaves every slice mean unmoved), so the variance term is what
// makes q detectable for such alternatives; keeping its weight below the
// mean term stops a dominant variance direction from swamping the ratio
// criterion when both kinds of structure are present.
constexpr double kSaveWeight = 0.75;

// Columns flipped so the largest-magnitude entry is positive: eigenvector
// signs are arbitrary and this keeps estimates reproducible.
void canonicalize_columns(Mat& b) {
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    Eigen::Index imax = 0;
    b.col(j).cwiseAbs().maxCoeff(&imax);
    if (b(imax, j) < 0.0) b.col(j) = -b.col(j);
  }
}

}  // namespace

DeeMatrix dee_matrix(const Dataset& d) {
  const Eigen::Index n = d.n();
  const Eigen::Index p = d.p();
  if (n < p + 3)
    fail(ErrorCode::TooFewRows, "dimension reduction needs n >= p + 3");

  const Mat xc = d.xs.rowwise() - d.xs.colwise().mean();
  const Mat cov = (xc.transpose() * xc) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Mat> cov_es(cov);
  const Vec cvals = cov_es.eigenvalues();  // ascending
  if (!(cvals(0) > 1e-12 * std::max(cvals(p - 1), 1e-300)))
    fail(ErrorCode::DegenerateColumn,
         "predictor covariance is singular; drop collinear columns");
  const Vec inv_sqrt = cvals.array().rsqrt();
  // Symmetric inverse square root: rotation-equivariant whitening.
  const Mat w = cov_es.eigenvectors() * inv_sqrt.asDiagonal() *
                cov_es.eigenvectors().transpose();
  const Mat z = xc * w;

  // Sort by response once; slice moments of every two-slice split are then
  // prefix sums. With S_k the prefix sum of whitened rows, the mean part of
  // the cut-k candidate is the rank-one matrix S_k S_k' / (k (n - k)); the
  // variance part needs the prefix second moment as well.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return d.ys(a) < d.ys(b);
  });

  Mat m = Mat::Zero(p, p);
  Vec prefix = Vec::Zero(p);
  Mat prefix2 = Mat::Zero(p, p);
  Mat total2 = Mat::Zero(p, p);
  total2.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
  total2 = total2.selfadjointView<Eigen::Lower>();
  const Mat eye = Mat::Identity(p, p);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j < n && d.ys(order[static_cast<std::size_t>(j)]) ==
                        d.ys(order[static_cast<std::size_t>(i)]))
      ++j;
    for (Eigen::Index r = i; r < j; ++r) {
      const auto row = z.row(order[static_cast<std::size_t>(r)]);
      prefix += row.transpose();
      prefix2.selfadjointView<Eigen::Lower>().rankUpdate(row.transpose());
    }
    // k observations have y <= y_i for every i in this tie group.
    const double k = static_cast<double>(j);
    const double rest = static_cast<double>(n - j);
    if (k >= 2.0 && rest >= 2.0) {
      const double cnt = static_cast<double>(j - i);
      m.selfadjointView<Eigen::Lower>().rankUpdate(prefix, cnt / (k * rest));
      const Vec m0 = prefix / k;
      const Vec m1 = -prefix / rest;
      const Mat low = Mat(prefix2.selfadjointView<Eigen::Lower>());
      const Mat v0 = low / k - m0 * m0.transpose();
      const Mat v1 = (total2 - low) / rest - m1 * m1.transpose();
      const Mat d0 = eye - v0;
      const Mat d1 = eye - v1;
      m.triangularView<Eigen::Lower>() +=
          (cnt * kSaveWeight) *
          ((k / n) * d0 * d0 + (rest / n) * d1 * d1);
    }
    i = j;
  }
  m = m.selfadjointView<Eigen::Lower>();
  m /= static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  DeeMatrix out;
  out.m = m;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  canonicalize_columns(out.eigenvectors);
  out.back_transform = w;
  return out;
}

double mrer_default_c(Eigen::Index n) {
  return std::log(static_cast<double>(n)) / static_cast<double>(n);
}

int mrer(const Vec& eigenvalues_desc, double c) {
  const Eigen::Index p = eigenvalues_desc.size();
  if (p < 1) fail(ErrorCode::InvalidArgument, "mrer: empty spectrum");
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "mrer: c must be positive");
  Vec l2(p + 1);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double l = std::max(eigenvalues_desc(i), 0.0);
    l2(i) = l * l;
  }
  l2(p) = 0.0;
  int best = 1;
  double best_ratio = (l2(1) + c) / (l2(0) + c);
  for (Eigen::Index i = 1; i < p; ++i) {
    const double r = (l2(i + 1) + c) / (l2(i) + c);
    if (r < best_ratio) {
      best_ratio = r;
      best = static_cast<int>(i) + 1;
    }
  }
  return best;
}

SdrEstimate sdr_estimate(const Dataset& d, std::optional<double> c_override) {
  const DeeMatrix dee = dee_matrix(d);
  const double c = c_override.value_or(mrer_default_c(d.n()));
  const int q = mrer(dee.eigenvalues, c);

  // Back-transform the leading eigenvectors to original coordinates, then
  // re-orthonormalize; the whitening map does not preserve angles.
  const Mat dirs = dee.back_transform * dee.eigenvectors.leftCols(q);
  Eigen::HouseholderQR<Mat> qr(dirs);
  Mat b = qr.householderQ() * Mat::Identity(d.p(), q);
  const Mat r = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
  for (int j = 0; j < q; ++j)
    if (r(j, j) < 0.0) b.col(j) = -b.col(j);
  canonicalize_columns(b);

  SdrEstimate out;
  out.q = q;
  out.b = b;
  out.eigenvalues = dee.eigenvalues;
  out.mrer_c = c;
  return out;
}

}  // namespace sitest
