#include <algorithm>
#include <cmath>
#include <vector>

#include "sitest/common.hpp"
#include "sitest/nulldist.hpp"
#include "sitest/simd/kernels.hpp"

namespace sitest {

double NullTable::quantile(double p) const {
  if (samples.empty())
    fail(ErrorCode::InvalidArgument, "quantile of an empty table");
  if (!(p > 0.0 && p <= 1.0))
    fail(ErrorCode::InvalidArgument, "quantile level must lie in (0, 1]");
  const std::size_t n = samples.size();
  std::size_t idx = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(n)));
  idx = std::max<std::size_t>(1, std::min(idx, n));
  return samples[idx - 1];
}

NullTable simulate_null_paths(int m, int k, RngSpec rng) {
  if (m < 1 || k < 1)
    fail(ErrorCode::InvalidArgument, "simulate_null_paths: m, k >= 1");
  StreamRng gen(rng);
  NullTable table;
  table.method = "paths";
  table.seed = rng.seed;
  table.stream = rng.stream;
  table.resolution = k;
  table.samples.resize(static_cast<std::size_t>(m));
  std::vector<double> incr(static_cast<std::size_t>(k));
  const double step_sd = 1.0 / std::sqrt(static_cast<double>(k));
  for (int r = 0; r < m; ++r) {
    gen.fill_normal(incr.data(), incr.size());
    for (double& v : incr) v *= step_sd;
    table.samples[static_cast<std::size_t>(r)] =
        simd::cvm_path_integral(incr.data(), incr.size());
  }
  std::sort(table.samples.begin(), table.samples.end());
  return table;
}

NullTable simulate_null_series(int m, int terms, RngSpec rng) {
  if (m < 1 || terms < 1)
    fail(ErrorCode::InvalidArgument, "simulate_null_series: m, terms >= 1");
  StreamRng gen(rng);
  NullTable table;
  table.method = "series";
  table.seed = rng.seed;
  table.stream = rng.stream;
  table.resolution = terms;
  std::vector<double> lambda(static_cast<std::size_t>(terms));
  double tail = 0.5;  // E integral B^2 = sum of all eigenvalues
  for (int j = 1; j <= terms; ++j) {
    const double den = (static_cast<double>(j) - 0.5) * M_PI;
    lambda[static_cast<std::size_t>(j - 1)] = 1.0 / (den * den);
    tail -= lambda[static_cast<std::size_t>(j - 1)];
  }
  table.samples.resize(static_cast<std::size_t>(m));
  std::vector<double> z(static_cast<std::size_t>(terms));
  for (int r = 0; r < m; ++r) {
    gen.fill_normal(z.data(), z.size());
    double acc = tail;
    for (int j = 0; j < terms; ++j)
      acc += lambda[static_cast<std::size_t>(j)] *
             z[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(j)];
    table.samples[static_cast<std::size_t>(r)] = acc;
  }
  std::sort(table.samples.begin(), table.samples.end());
  return table;
}

double p_value(double w, const NullTable& table) {
  if (table.samples.empty())
    fail(ErrorCode::InvalidArgument, "p_value against an empty table");
  const auto it =
      std::lower_bound(table.samples.begin(), table.samples.end(), w);
  const auto count = table.samples.end() - it;
  return (static_cast<double>(count) + 1.0) /
         (static_cast<double>(table.samples.size()) + 1.0);
}

}  // namespace sitest
