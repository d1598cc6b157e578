#pragma once

#include <cstddef>
#include <cstdint>

namespace sitest {

// Seed plus stream index. Distinct streams from one seed yield independent
// generators (the stream is folded into the seeding hash), so parallel
// replications can draw without coordination and results do not depend on
// scheduling.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  // Derived spec for a sub-purpose (data vs. test vs. grid draws).
  RngSpec child(std::uint64_t tag) const;
};

// xoshiro256** with splitmix64 seeding. Self-contained so that identical
// (seed, stream) reproduces bit-identical draws on every platform.
class StreamRng {
 public:
  explicit StreamRng(RngSpec spec);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double next_unit();
  // Standard normal via Box-Muller; second value of each pair is cached.
  double next_normal();
  void fill_normal(double* out, std::size_t n);

 private:
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sitest
