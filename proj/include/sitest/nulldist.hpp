#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sitest/rng.hpp"

namespace sitest {

// Monte Carlo table of the limiting null law of the statistic:
// integral of B(u)^2 du over [0,1] for a standard Brownian motion B.
// E = 1/2, Var = 1/3.
struct NullTable {
  std::vector<double> samples;  // sorted ascending
  std::string method;           // "paths" or "series"
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  int resolution = 0;  // path steps k, or series terms

  std::size_t m() const { return samples.size(); }
  // Empirical quantile, order statistic ceil(p*m).
  double quantile(double p) const;
};

// Oracle 1: discretized Brownian paths, k steps, trapezoid integration.
NullTable simulate_null_paths(int m, int k, RngSpec rng);

// Oracle 2: Karhunen-Loeve series sum_j Z_j^2 / ((j - 1/2)^2 pi^2) truncated
// at `terms`, plus the deterministic tail mean 1/2 - sum_{j<=terms} lambda_j.
NullTable simulate_null_series(int m, int terms, RngSpec rng);

// Finite-sample corrected Monte Carlo p-value: (#{samples >= w} + 1)/(m + 1).
double p_value(double w, const NullTable& table);

// Production table generated at build time by the series oracle
// (m = 200000, 200 terms; seed recorded in the table).
const NullTable& embedded_null_table();

}  // namespace sitest
