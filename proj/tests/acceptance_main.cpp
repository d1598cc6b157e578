// End-to-end acceptance gate. Every criterion prints one PASS/FAIL line with
// the measured numbers; the binary exits nonzero if any executed criterion
// fails. Criterion 9 needs the airfoil dataset on disk and reports SKIP
// (exit 77 when run alone) if it is absent.
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sitest/dataset.hpp"
#include "sitest/fit.hpp"
#include "sitest/model.hpp"
#include "sitest/nulldist.hpp"
#include "sitest/scenarios.hpp"
#include "sitest/sdr.hpp"
#include "sitest/transform.hpp"
#include "sitest/zheng.hpp"

using namespace sitest;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr int kReps = 500;

struct Outcome {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// One Monte Carlo cell; returns rejection rates in test order.
std::vector<double> study_rates(Example ex, XLaw law, int n, double a,
                                const std::vector<TestConfig::Kind>& kinds,
                                std::uint64_t seed = kSeed) {
  ScenarioSpec spec;
  spec.example = ex;
  spec.n = n;
  spec.a = a;
  spec.x_law = law;
  std::vector<TestConfig> tests;
  for (TestConfig::Kind k : kinds) {
    TestConfig cfg;
    cfg.kind = k;
    tests.push_back(cfg);
  }
  const auto rows = run_study(spec, tests, kReps, 0.05, RngSpec{seed, 0}, 1);
  std::vector<double> rates;
  for (const auto& r : rows) {
    if (!r.valid)
      fail(ErrorCode::InvalidArgument,
           "study cell had too many failures: " + r.scenario);
    rates.push_back(r.reject_rate);
  }
  return rates;
}

Outcome criterion_1() {
  const double rate = study_rates(Example::H11, XLaw::Isotropic, 100, 0.0,
                                  {TestConfig::Kind::Wn})[0];
  Outcome o;
  o.pass = rate >= 0.02 && rate <= 0.09;
  o.detail = "isotropic null size " + fmt(rate) + " in [0.02, 0.09]";
  return o;
}

Outcome criterion_2() {
  const double rate = study_rates(Example::H13, XLaw::Autoregressive, 100, 0.0,
                                  {TestConfig::Kind::Wn})[0];
  Outcome o;
  o.pass = rate >= 0.02 && rate <= 0.09;
  o.detail = "correlated null size " + fmt(rate) + " in [0.02, 0.09]";
  return o;
}

// Criteria 3 and 4 share the H31 cell; both rates are computed once.
struct H31Rates {
  double wn;
  double zheng;
};

H31Rates h31_rates() {
  static bool done = false;
  static H31Rates r;
  if (!done) {
    const auto rates =
        study_rates(Example::H31, XLaw::Isotropic, 100, 0.6,
                    {TestConfig::Kind::Wn, TestConfig::Kind::Zheng});
    r.wn = rates[0];
    r.zheng = rates[1];
    done = true;
  }
  return r;
}

Outcome criterion_3() {
  const double h12 = study_rates(Example::H12, XLaw::Autoregressive, 100, 0.6,
                                 {TestConfig::Kind::Wn})[0];
  const double h31 = h31_rates().wn;
  Outcome o;
  o.pass = h12 >= 0.9 && h31 >= 0.9;
  o.detail = "power H12-AR " + fmt(h12) + " >= 0.9, H31 " + fmt(h31) +
             " >= 0.9";
  return o;
}

Outcome criterion_4() {
  const H31Rates r = h31_rates();
  Outcome o;
  o.pass = r.zheng <= 0.4 && (r.wn - r.zheng) >= 0.3;
  o.detail = "kernel comparator " + fmt(r.zheng) +
             " <= 0.4 on the paired-quadratic cell, gap " +
             fmt(r.wn - r.zheng) + " >= 0.3";
  return o;
}

Outcome criterion_5() {
  const auto rates =
      study_rates(Example::EX1_p3, XLaw::Isotropic, 100, 1.0,
                  {TestConfig::Kind::Wn, TestConfig::Kind::WnSingle});
  Outcome o;
  o.pass = rates[0] >= 0.5 && rates[1] <= 0.15;
  o.detail = "adaptive power " + fmt(rates[0]) +
             " >= 0.5 while the frozen single-direction variant stays at " +
             fmt(rates[1]) + " <= 0.15";
  return o;
}

double q_frequency(Example ex, int n, double a, int target_q) {
  ScenarioSpec spec;
  spec.example = ex;
  spec.n = n;
  spec.a = a;
  int hits = 0;
  for (int r = 0; r < kReps; ++r) {
    const RngSpec rep_rng{kSeed, static_cast<std::uint64_t>(r)};
    const Dataset d = generate(spec, rep_rng.child(0));
    hits += (sdr_estimate(d).q == target_q) ? 1 : 0;
  }
  return static_cast<double>(hits) / kReps;
}

Outcome criterion_6() {
  const double null_q1 = q_frequency(Example::H12, 100, 0.0, 1);
  const double alt_q2 = q_frequency(Example::H31, 400, 1.0, 2);
  const double local_q1 = q_frequency(Example::LOCAL, 400, 0.0, 1);
  Outcome o;
  o.pass = null_q1 >= 0.9 && alt_q2 >= 0.9 && local_q1 >= 0.9;
  o.detail = "dimension frequencies: null q=1 " + fmt(null_q1) +
             ", quadratic q=2 " + fmt(alt_q2) + ", local q=1 " +
             fmt(local_q1) + ", all >= 0.9";
  return o;
}

Outcome criterion_7() {
  // (i) the estimation drift is annihilated: feed the transform the
  // pure-drift step process built from the M_n-increments along the fitted
  // score direction (for the linear family the marks w_j'c = t_j are a
  // deterministic function of the projection, so the path carries drift
  // only). Components of c orthogonal to the score inject the conditional
  // noise of X given the projection, which is not drift and not claimed.
  ScenarioSpec spec;
  spec.example = Example::H12;
  spec.n = 500;
  const SingleIndexModel m = null_model(spec);
  Vec alpha(1);
  alpha << 1.0;
  double worst = 0.0;
  for (int r = 0; r < 3; ++r) {
    const Dataset d = generate(spec, RngSpec{kSeed, static_cast<std::uint64_t>(r)});
    const FitResult fit = fit_model(d, m);
    const Mat b = fit.beta / fit.beta.norm();
    const ProjectionFrame frame = make_frame(d.xs, b, alpha);
    Vec t_sorted = frame.t;
    std::sort(t_sorted.data(), t_sorted.data() + t_sorted.size());
    const double x0 = t_sorted(static_cast<Eigen::Index>(
                          std::ceil(0.99 * 500.0)) - 1);
    const EmpiricalTransform tr = empirical_transform(d, m, fit, frame, x0);
    const Vec drift = d.xs * (fit.beta / fit.beta.norm());
    const ProcessPath v = residual_process(frame, drift, x0);
    const ProcessPath tv = transform_process(tr, frame, drift);
    worst = std::max(worst, tv.value.cwiseAbs().maxCoeff() /
                                v.value.cwiseAbs().maxCoeff());
  }

  // (ii) under the null the transformed-path second moment tracks the
  // cumulative residual variance psi_n at fixed quantiles of the
  // projection axis.
  spec.n = 200;
  const double qs[3] = {0.25, 0.5, 0.75};
  double num[3] = {0, 0, 0}, den[3] = {0, 0, 0};
  for (int r = 0; r < kReps; ++r) {
    const RngSpec rep_rng{kSeed, static_cast<std::uint64_t>(r)};
    const Dataset dr = generate(spec, rep_rng.child(0));
    const FitResult fr = fit_model(dr, m);
    const Mat br = fr.beta / fr.beta.norm();
    const ProjectionFrame fra = make_frame(dr.xs, br, alpha);
    Vec ts = fra.t;
    std::sort(ts.data(), ts.data() + ts.size());
    const double x0r = ts(static_cast<Eigen::Index>(std::ceil(0.99 * 200.0)) -
                          1);
    const EmpiricalTransform trr =
        empirical_transform(dr, m, fr, fra, x0r);
    const ProcessPath tv = transform_process(trr, fra, fr.residuals);
    for (int qi = 0; qi < 3; ++qi) {
      const double uq = ts(static_cast<Eigen::Index>(
                            std::ceil(qs[qi] * 200.0)) - 1);
      const double val = tv.eval(uq);
      num[qi] += val * val;
      double psi = 0.0;
      for (Eigen::Index i = 0; i < dr.n(); ++i)
        if (fra.t(i) <= uq) psi += fr.residuals(i) * fr.residuals(i);
      den[qi] += psi / 200.0;
    }
  }
  double worst_ratio = 1.0;
  std::string ratios;
  for (int qi = 0; qi < 3; ++qi) {
    const double ratio = num[qi] / den[qi];
    if (std::abs(ratio - 1.0) > std::abs(worst_ratio - 1.0))
      worst_ratio = ratio;
    ratios += (qi ? "/" : "") + fmt(ratio);
  }

  Outcome o;
  o.pass = worst <= 0.05 && worst_ratio >= 0.75 && worst_ratio <= 1.25;
  o.detail = "drift sup-ratio " + fmt(worst) +
             " <= 0.05; variance ratios " + ratios + " within 25%";
  return o;
}

Outcome criterion_8() {
  const int m = 1000000;
  const NullTable paths = simulate_null_paths(m, 2048, RngSpec{kSeed, 0});
  const NullTable series = simulate_null_series(m, 500, RngSpec{kSeed, 1});

  double dq = 0.0;
  for (double p : {0.9, 0.95, 0.99})
    dq = std::max(dq, std::abs(paths.quantile(p) - series.quantile(p)));

  double mean = 0.0;
  for (double v : paths.samples) mean += v;
  mean /= m;
  const double mean_err = std::abs(mean - 0.5);
  const double mean_lim = 3.0 * std::sqrt(1.0 / 3.0 / m);

  double s_mean = 0.0;
  for (double v : series.samples) s_mean += v;
  s_mean /= m;
  double var = 0.0, m4 = 0.0;
  for (double v : series.samples) {
    const double c = v - s_mean;
    var += c * c;
    m4 += c * c * c * c;
  }
  var /= m;
  m4 /= m;
  const double var_sd = std::sqrt(std::max(m4 - var * var, 0.0) / m);
  const double var_err = std::abs(var - 1.0 / 3.0);

  Outcome o;
  o.pass = dq <= 0.02 && mean_err <= mean_lim && var_err <= 3.0 * var_sd;
  o.detail = "tail quantile gap " + fmt(dq) + " <= 0.02, path mean off by " +
             fmt(mean_err) + " (limit " + fmt(mean_lim) +
             "), series variance off by " + fmt(var_err) + " (limit " +
             fmt(3.0 * var_sd) + ")";
  return o;
}

std::string airfoil_path() {
  if (const char* env = std::getenv("SITEST_AIRFOIL_DATA")) return env;
  for (const char* cand : {"data/airfoil_self_noise.dat",
                           "../data/airfoil_self_noise.dat"}) {
    std::ifstream f(cand);
    if (f) return cand;
  }
  return "";
}

Outcome criterion_9() {
  const std::string path = airfoil_path();
  Outcome o;
  if (path.empty()) {
    o.skipped = true;
    o.detail =
        "airfoil data not found (set SITEST_AIRFOIL_DATA or place "
        "data/airfoil_self_noise.dat)";
    return o;
  }
  // The distributed file is headerless and tab-separated; synthesize a
  // header so the standard loader applies.
  std::ifstream raw(path);
  std::stringstream patched;
  patched << "frequency\tattack_angle\tchord\tvelocity\tthickness\tspl\n";
  patched << raw.rdbuf();
  const Dataset d = load_dataset(patched, "", true);

  WnOptions opts;
  opts.rng = RngSpec{kSeed, 0};
  const TestReport lin = wn_statistic(
      d, SingleIndexModel::make(Family::Linear, int(d.p())), opts);
  const TestReport cubic = wn_statistic(
      d, SingleIndexModel::make(Family::CubicIndex, int(d.p())), opts);
  o.pass = lin.p_value < 0.01 && cubic.p_value > 0.3;
  o.detail = "airfoil: linear family p " + fmt(lin.p_value) +
             " < 0.01, cubic-index family p " + fmt(cubic.p_value) + " > 0.3";
  return o;
}

Outcome criterion_10() {
  // Five observations, every ingredient against the direct-sum reference.
  Dataset d;
  d.xs.resize(5, 2);
  d.xs << 0.3, -1.2, 1.7, 0.4, -0.9, 2.1, 2.2, -0.6, -1.4, 0.8;
  d.ys.resize(5);
  d.ys << 0.5, 2.0, -1.1, 2.9, -2.0;
  d.names = {"x1", "x2"};
  d.response_name = "y";
  d.center = Vec::Zero(3);
  d.scale = Vec::Ones(3);

  const auto m = SingleIndexModel::make(Family::Linear, 2);
  const FitResult fit = fit_model(d, m);
  const Mat b = fit.beta / fit.beta.norm();
  Vec alpha(1);
  alpha << 1.0;
  const ProjectionFrame frame = make_frame(d.xs, b, alpha);
  const double x0 = frame.t.maxCoeff();
  const double h = bandwidth_rule(frame.t);

  TransformOptions topts;
  topts.kernel.bandwidth = h;
  const EmpiricalTransform tr =
      empirical_transform(d, m, fit, frame, x0, topts);
  const ProcessPath v = residual_process(frame, fit.residuals, x0);
  const ProcessPath tv = transform_process(tr, frame, fit.residuals);
  const auto ref =
      oracle::brute_transform(d.xs, m, fit.beta, fit.theta, fit.residuals,
                              b.col(0), x0, topts.kernel.family, h, true);

  double worst = 0.0;
  for (Eigen::Index r = 0; r < tr.m_ret; ++r) {
    worst = std::max(worst, std::abs(v.value(r) - ref.v(r)));
    worst = std::max(worst, std::abs(tv.value(r) - ref.tv(r)));
    worst = std::max(
        worst, (tr.a.row(r) - ref.a.row(r)).cwiseAbs().maxCoeff());
    worst = std::max(
        worst, (tr.m_path.row(r) - ref.m.row(r)).cwiseAbs().maxCoeff());
    const Mat a_prod = tr.a_tail[static_cast<std::size_t>(r)] *
                       ref.a_mat[static_cast<std::size_t>(r)];
    const Mat a_ref = oracle::trunc_pinv(
                          ref.a_mat[static_cast<std::size_t>(r)], 1e-1) *
                      ref.a_mat[static_cast<std::size_t>(r)];
    worst = std::max(worst, (a_prod - a_ref).cwiseAbs().maxCoeff());
  }
  Outcome o;
  o.pass = worst <= 1e-12 && tr.m_ret == 5;
  o.detail = "n=5 direct-summation gap " + fmt(worst) + " <= 1e-12";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }

  Outcome (*const fns[])() = {criterion_1, criterion_2, criterion_3,
                              criterion_4, criterion_5, criterion_6,
                              criterion_7, criterion_8, criterion_9,
                              criterion_10};
  bool all_pass = true;
  bool only_skipped = false;
  for (int i = 1; i <= 10; ++i) {
    if (only != 0 && only != i) continue;
    Outcome o;
    try {
      o = fns[i - 1]();
    } catch (const Error& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const char* verdict = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
    std::cout << "criterion " << i << ": " << verdict << " - " << o.detail
              << "\n";
    if (!o.pass && !o.skipped) all_pass = false;
    if (only == i && o.skipped) only_skipped = true;
  }
  if (only_skipped) return 77;
  return all_pass ? 0 : 1;
}
