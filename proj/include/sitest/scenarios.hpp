#pragma once

#include <string>
#include <vector>

#include "sitest/dataset.hpp"
#include "sitest/model.hpp"
#include "sitest/rng.hpp"
#include "sitest/transform.hpp"
#include "sitest/zheng.hpp"

namespace sitest {

// Benchmark data-generating processes. `a` is the departure amplitude
// (a = 0 collapses every example to its null model). LOCAL replaces a by the
// vanishing sequence n^{-1/2} on the H31 quadratic departure.
enum class Example {
  EX1_p3,  // y = exp(2 b1'x)/4 + a b2'x + e, p = 3
  EX1_p4,  // same, p = 4 paired directions
  H11,     // y = b0'x + a cos(pi/2 b0'x) + e
  H12,     // y = b0'x + a exp(b0'x)/4 + e
  H13,     // y = b0'x + a (b0'x)^2/2 + e
  H31,     // y = b1'x + a (b2'x)^2 + e
  H32,     // y = b1'x + a exp(-(b2'x)^2) + e
  H41,     // y = exp(x1/2) + a x2^3 + e
  H42,     // y = exp(x1/2) + a (x2^3 + cos(pi x3) + x4) + e
  H43,     // y = exp(x1/2) + a (x2^3 + cos(pi x3) + x4 - |x5| + x6^2 + x7 x8) + e
  LOCAL,   // y = b1'x + n^{-1/2} (b2'x)^2 + e
};

enum class XLaw { Isotropic, Autoregressive };  // Sigma_ij = 0.5^|i-j|

struct ScenarioSpec {
  Example example = Example::H11;
  int n = 100;
  int p = 0;  // 0 means the example's default
  double a = 0.0;
  XLaw x_law = XLaw::Isotropic;
};

Example example_from_string(const std::string& s);
const char* example_name(Example e);
int default_p(Example e);
// Throws InvalidArgument when (example, p) is inconsistent (EX1 dimensions
// are fixed; paired-direction examples need even p; H4x needs enough
// coordinates).
void validate(const ScenarioSpec& spec);

// Covariates N(0, I) or N(0, Sigma) via the symmetric square root; errors
// standard normal. Column names x1..xp, response y.
Dataset generate(const ScenarioSpec& spec, RngSpec rng);

// The hypothesized family each example is tested against.
SingleIndexModel null_model(const ScenarioSpec& spec);

// True index directions useful in tests: b1 (and b2 where defined).
Mat true_directions(const ScenarioSpec& spec);

struct TestConfig {
  enum class Kind { Wn, WnSingle, Zheng };
  Kind kind = Kind::Wn;
  std::string label;  // defaults to the kind name
  WnOptions wn;
  ZhengOptions zheng;
};

struct StudyRow {
  std::string scenario;
  double a = 0.0;
  int n = 0;
  int p = 0;
  std::string test;
  int reps = 0;
  double level = 0.05;
  double reject_rate = 0.0;
  double mean_stat = 0.0;
  int failures = 0;
  bool valid = true;  // false when failures exceed 2% of reps
  std::uint64_t seed = 0;
};

// Monte Carlo study: per-replication RNG streams derived from (rng, rep), so
// results are identical for any worker count. Replications where a test
// throws are counted as failures, never silently dropped.
std::vector<StudyRow> run_study(const ScenarioSpec& spec,
                                const std::vector<TestConfig>& tests, int reps,
                                double level, RngSpec rng, int workers = 1);

}  // namespace sitest
