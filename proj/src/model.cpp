#include "sitest/model.hpp"

#include <cmath>

namespace sitest {
namespace {

// exp() overflows past ~709; flag the family domain before that happens.
inline void check_exp_arg(double a, const char* family) {
  if (!(a < 700.0) || !(a > -745.0))
    fail(ErrorCode::DomainError,
         std::string(family) + " evaluated outside its domain (exp argument " +
             std::to_string(a) + ")");
}

inline void need_theta(const Vec& theta, int d, const char* family) {
  if (theta.size() != d)
    fail(ErrorCode::InvalidArgument,
         std::string(family) + " needs theta of length " + std::to_string(d));
}

}  // namespace

double SingleIndexModel::g(double t, const Vec& theta) const {
  switch (family) {
    case Family::Linear:
      return t;
    case Family::ScaledExponential: {
      need_theta(theta, 2, "scaled-exponential");
      check_exp_arg(theta(1) * t, "scaled-exponential");
      return theta(0) * std::exp(theta(1) * t);
    }
    case Family::ExpIndex:
      check_exp_arg(2.0 * t, "exp-index");
      return 0.25 * std::exp(2.0 * t);
    case Family::CubicIndex: {
      need_theta(theta, 4, "cubic-index");
      return theta(0) + t * (theta(1) + t * (theta(2) + t * theta(3)));
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown family");
}

double SingleIndexModel::g1(double t, const Vec& theta) const {
  switch (family) {
    case Family::Linear:
      return 1.0;
    case Family::ScaledExponential: {
      need_theta(theta, 2, "scaled-exponential");
      check_exp_arg(theta(1) * t, "scaled-exponential");
      return theta(0) * theta(1) * std::exp(theta(1) * t);
    }
    case Family::ExpIndex:
      check_exp_arg(2.0 * t, "exp-index");
      return 0.5 * std::exp(2.0 * t);
    case Family::CubicIndex: {
      need_theta(theta, 4, "cubic-index");
      return theta(1) + t * (2.0 * theta(2) + t * 3.0 * theta(3));
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown family");
}

Vec SingleIndexModel::g2(double t, const Vec& theta) const {
  switch (family) {
    case Family::Linear:
    case Family::ExpIndex:
      return Vec(0);
    case Family::ScaledExponential: {
      need_theta(theta, 2, "scaled-exponential");
      check_exp_arg(theta(1) * t, "scaled-exponential");
      const double e = std::exp(theta(1) * t);
      Vec out(2);
      out << e, theta(0) * t * e;
      return out;
    }
    case Family::CubicIndex: {
      need_theta(theta, 4, "cubic-index");
      Vec out(4);
      out << 1.0, t, t * t, t * t * t;
      return out;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown family");
}

const char* SingleIndexModel::family_name() const {
  switch (family) {
    case Family::Linear: return "linear";
    case Family::ScaledExponential: return "scaled-exponential";
    case Family::ExpIndex: return "exp-index";
    case Family::CubicIndex: return "cubic-index";
  }
  return "unknown";
}

SingleIndexModel SingleIndexModel::make(Family f, int p) {
  if (p < 1) fail(ErrorCode::InvalidArgument, "model needs p >= 1");
  int d = 0;
  switch (f) {
    case Family::Linear:
    case Family::ExpIndex: d = 0; break;
    case Family::ScaledExponential: d = 2; break;
    case Family::CubicIndex: d = 4; break;
  }
  return SingleIndexModel{f, p, d};
}

Family SingleIndexModel::family_from_string(const std::string& s) {
  std::string k;
  for (char c : s) k.push_back(c == '_' ? '-' : c);
  if (k == "linear") return Family::Linear;
  if (k == "scaled-exponential") return Family::ScaledExponential;
  if (k == "exp-index") return Family::ExpIndex;
  if (k == "cubic-index") return Family::CubicIndex;
  fail(ErrorCode::InvalidArgument, "unknown family '" + s + "'");
}

}  // namespace sitest
