#include "sitest/scenarios.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <thread>

namespace sitest {
namespace {

struct ExampleInfo {
  Example e;
  const char* name;
  int default_p;
};

constexpr ExampleInfo kExamples[] = {
    {Example::EX1_p3, "EX1_p3", 3}, {Example::EX1_p4, "EX1_p4", 4},
    {Example::H11, "H11", 8},       {Example::H12, "H12", 8},
    {Example::H13, "H13", 8},       {Example::H31, "H31", 8},
    {Example::H32, "H32", 8},       {Example::H41, "H41", 4},
    {Example::H42, "H42", 4},       {Example::H43, "H43", 8},
    {Example::LOCAL, "LOCAL", 8},
};

int resolved_p(const ScenarioSpec& spec) {
  return spec.p > 0 ? spec.p : default_p(spec.example);
}

Vec half_direction(int p, bool first_half) {
  Vec b = Vec::Zero(p);
  const int h = p / 2;
  const double v = 1.0 / std::sqrt(static_cast<double>(h));
  for (int i = 0; i < h; ++i) b(first_half ? i : h + i) = v;
  return b;
}

Mat sigma_sqrt(int p) {
  Mat sigma(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      sigma(i, j) = std::pow(0.5, std::abs(i - j));
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
  return es.operatorSqrt();
}

}  // namespace

Example example_from_string(const std::string& s) {
  for (const auto& info : kExamples)
    if (s == info.name) return info.e;
  fail(ErrorCode::InvalidArgument, "unknown scenario '" + s + "'");
}

const char* example_name(Example e) {
  for (const auto& info : kExamples)
    if (e == info.e) return info.name;
  return "?";
}

int default_p(Example e) {
  for (const auto& info : kExamples)
    if (e == info.e) return info.default_p;
  return 0;
}

void validate(const ScenarioSpec& spec) {
  const int p = resolved_p(spec);
  if (spec.n < 1) fail(ErrorCode::InvalidArgument, "scenario: n >= 1");
  if (spec.a < 0.0) fail(ErrorCode::InvalidArgument, "scenario: a >= 0");
  switch (spec.example) {
    case Example::EX1_p3:
      if (p != 3) fail(ErrorCode::InvalidArgument, "EX1_p3 requires p = 3");
      break;
    case Example::EX1_p4:
      if (p != 4) fail(ErrorCode::InvalidArgument, "EX1_p4 requires p = 4");
      break;
    case Example::H11:
    case Example::H12:
    case Example::H13:
      if (p < 1) fail(ErrorCode::InvalidArgument, "H1x requires p >= 1");
      break;
    case Example::H31:
    case Example::H32:
    case Example::LOCAL:
      if (p < 2 || p % 2 != 0)
        fail(ErrorCode::InvalidArgument,
             "paired-direction examples require even p >= 2");
      break;
    case Example::H41:
      if (p < 2) fail(ErrorCode::InvalidArgument, "H41 requires p >= 2");
      break;
    case Example::H42:
      if (p < 4) fail(ErrorCode::InvalidArgument, "H42 requires p >= 4");
      break;
    case Example::H43:
      if (p < 8) fail(ErrorCode::InvalidArgument, "H43 requires p >= 8");
      break;
  }
}

Mat true_directions(const ScenarioSpec& spec) {
  const int p = resolved_p(spec);
  switch (spec.example) {
    case Example::EX1_p3: {
      Mat b = Mat::Zero(3, 2);
      b(0, 0) = 1.0;
      b(1, 1) = 1.0;
      return b;
    }
    case Example::EX1_p4: {
      Mat b = Mat::Zero(4, 2);
      const double r = 1.0 / std::sqrt(2.0);
      b(0, 0) = b(1, 0) = r;
      b(2, 1) = b(3, 1) = r;
      return b;
    }
    case Example::H11:
    case Example::H12:
    case Example::H13: {
      Mat b(p, 1);
      b.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(p)));
      return b;
    }
    case Example::H31:
    case Example::H32:
    case Example::LOCAL: {
      Mat b(p, 2);
      b.col(0) = half_direction(p, true);
      b.col(1) = half_direction(p, false);
      return b;
    }
    case Example::H41: {
      Mat b = Mat::Identity(p, p).leftCols(2);
      return b;
    }
    case Example::H42: {
      Mat b = Mat::Identity(p, p).leftCols(4);
      return b;
    }
    case Example::H43: {
      Mat b = Mat::Identity(p, p).leftCols(8);
      return b;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown example");
}

SingleIndexModel null_model(const ScenarioSpec& spec) {
  const int p = resolved_p(spec);
  switch (spec.example) {
    case Example::EX1_p3:
    case Example::EX1_p4:
      return SingleIndexModel::make(Family::ExpIndex, p);
    case Example::H41:
    case Example::H42:
    case Example::H43:
      return SingleIndexModel::make(Family::ScaledExponential, p);
    default:
      return SingleIndexModel::make(Family::Linear, p);
  }
}

Dataset generate(const ScenarioSpec& spec, RngSpec rng) {
  validate(spec);
  const int p = resolved_p(spec);
  const Eigen::Index n = spec.n;
  StreamRng gen(rng);

  Mat xs(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) xs(i, j) = gen.next_normal();
  if (spec.x_law == XLaw::Autoregressive) xs = xs * sigma_sqrt(p);

  Vec eps(n);
  for (Eigen::Index i = 0; i < n; ++i) eps(i) = gen.next_normal();

  const Mat dirs = true_directions(spec);
  const double a = spec.example == Example::LOCAL
                       ? 1.0 / std::sqrt(static_cast<double>(n))
                       : spec.a;
  Vec ys(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x1 = xs(i, 0);
    double y = 0.0;
    switch (spec.example) {
      case Example::EX1_p3:
      case Example::EX1_p4: {
        const double t1 = dirs.col(0).dot(xs.row(i));
        const double t2 = dirs.col(1).dot(xs.row(i));
        y = 0.25 * std::exp(2.0 * t1) + a * t2;
        break;
      }
      case Example::H11: {
        const double t = dirs.col(0).dot(xs.row(i));
        y = t + a * std::cos(0.5 * M_PI * t);
        break;
      }
      case Example::H12: {
        const double t = dirs.col(0).dot(xs.row(i));
        y = t + 0.25 * a * std::exp(t);
        break;
      }
      case Example::H13: {
        const double t = dirs.col(0).dot(xs.row(i));
        y = t + 0.5 * a * t * t;
        break;
      }
      case Example::H31:
      case Example::LOCAL: {
        const double t1 = dirs.col(0).dot(xs.row(i));
        const double t2 = dirs.col(1).dot(xs.row(i));
        y = t1 + a * t2 * t2;
        break;
      }
      case Example::H32: {
        const double t1 = dirs.col(0).dot(xs.row(i));
        const double t2 = dirs.col(1).dot(xs.row(i));
        y = t1 + a * std::exp(-t2 * t2);
        break;
      }
      case Example::H41:
        y = std::exp(0.5 * x1) + a * std::pow(xs(i, 1), 3);
        break;
      case Example::H42:
        y = std::exp(0.5 * x1) +
            a * (std::pow(xs(i, 1), 3) + std::cos(M_PI * xs(i, 2)) +
                 xs(i, 3));
        break;
      case Example::H43:
        y = std::exp(0.5 * x1) +
            a * (std::pow(xs(i, 1), 3) + std::cos(M_PI * xs(i, 2)) +
                 xs(i, 3) - std::abs(xs(i, 4)) + xs(i, 5) * xs(i, 5) +
                 xs(i, 6) * xs(i, 7));
        break;
    }
    ys(i) = y + eps(i);
  }

  Dataset d;
  d.xs = std::move(xs);
  d.ys = std::move(ys);
  d.names.resize(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j)
    d.names[static_cast<std::size_t>(j)] = "x" + std::to_string(j + 1);
  d.response_name = "y";
  d.center = Vec::Zero(p + 1);
  d.scale = Vec::Ones(p + 1);
  return d;
}

std::vector<StudyRow> run_study(const ScenarioSpec& spec,
                                const std::vector<TestConfig>& tests, int reps,
                                double level, RngSpec rng, int workers) {
  validate(spec);
  if (reps < 1) fail(ErrorCode::InvalidArgument, "run_study: reps >= 1");
  if (tests.empty()) fail(ErrorCode::InvalidArgument, "run_study: no tests");
  const int nt = static_cast<int>(tests.size());

  struct Cell {
    double stat = 0.0;
    bool reject = false;
    bool failed = false;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(reps * nt));

  auto run_rep = [&](int r) {
    const RngSpec rep_rng{rng.seed, rng.stream + static_cast<std::uint64_t>(r)};
    const Dataset d = generate(spec, rep_rng.child(0));
    const SingleIndexModel m = null_model(spec);
    for (int t = 0; t < nt; ++t) {
      Cell& cell = cells[static_cast<std::size_t>(r * nt + t)];
      try {
        const TestConfig& cfg = tests[static_cast<std::size_t>(t)];
        switch (cfg.kind) {
          case TestConfig::Kind::Wn:
          case TestConfig::Kind::WnSingle: {
            WnOptions o = cfg.wn;
            o.single_projection = cfg.kind == TestConfig::Kind::WnSingle;
            o.rng = rep_rng.child(static_cast<std::uint64_t>(t) + 1);
            const TestReport rep = wn_statistic(d, m, o);
            cell.stat = rep.w2;
            cell.reject = rep.p_value <= level;
            break;
          }
          case TestConfig::Kind::Zheng: {
            const ZhengReport rep = zheng_test(d, m, cfg.zheng);
            cell.stat = rep.stat;
            cell.reject = rep.p_value <= level;
            break;
          }
        }
      } catch (const Error&) {
        cell.failed = true;
      }
    }
  };

  const int nw = std::max(1, workers);
  if (nw == 1) {
    for (int r = 0; r < reps; ++r) run_rep(r);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&, w] {
        for (int r = w; r < reps; r += nw) run_rep(r);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<StudyRow> rows;
  rows.reserve(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    const TestConfig& cfg = tests[static_cast<std::size_t>(t)];
    StudyRow row;
    row.scenario = example_name(spec.example);
    row.a = spec.a;
    row.n = spec.n;
    row.p = resolved_p(spec);
    if (!cfg.label.empty()) {
      row.test = cfg.label;
    } else {
      switch (cfg.kind) {
        case TestConfig::Kind::Wn: row.test = "wn"; break;
        case TestConfig::Kind::WnSingle: row.test = "wn-single"; break;
        case TestConfig::Kind::Zheng: row.test = "zheng"; break;
      }
    }
    row.reps = reps;
    row.level = level;
    row.seed = rng.seed;
    int ok = 0;
    int rejected = 0;
    double stat_sum = 0.0;
    for (int r = 0; r < reps; ++r) {
      const Cell& cell = cells[static_cast<std::size_t>(r * nt + t)];
      if (cell.failed) {
        ++row.failures;
        continue;
      }
      ++ok;
      stat_sum += cell.stat;
      rejected += cell.reject ? 1 : 0;
    }
    row.reject_rate = ok > 0 ? static_cast<double>(rejected) / ok : 0.0;
    row.mean_stat = ok > 0 ? stat_sum / ok : 0.0;
    row.valid = row.failures <= static_cast<int>(0.02 * reps);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sitest
