#pragma once

#include <string>

#include "sitest/common.hpp"

namespace sitest {

// Hypothesized regression families y = g(beta' x, theta) + e. d is the
// length of theta.
enum class Family {
  Linear,             // g(t) = t, d = 0
  ScaledExponential,  // g(t, theta) = theta1 * exp(theta2 * t), d = 2
  ExpIndex,           // g(t) = exp(2t)/4, d = 0
  CubicIndex,         // g(t, theta) = th1 + th2 t + th3 t^2 + th4 t^3, d = 4
};

struct SingleIndexModel {
  Family family = Family::Linear;
  int p = 0;
  int d = 0;

  double g(double t, const Vec& theta) const;
  // dg/dt; finite for all finite t in the family's domain.
  double g1(double t, const Vec& theta) const;
  // dg/dtheta, length d (empty for d = 0 families).
  Vec g2(double t, const Vec& theta) const;

  const char* family_name() const;

  static SingleIndexModel make(Family f, int p);
  static Family family_from_string(const std::string& s);
};

}  // namespace sitest
