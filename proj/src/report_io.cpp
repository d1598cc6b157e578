#include "sitest/report_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace sitest {
namespace {

const char* variance_mode_name(VarianceMode m) {
  return m == VarianceMode::Smoothed ? "smoothed" : "homoscedastic";
}

std::string format_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_vec(const Vec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v(i));
  }
  return s;
}

void write_report_text(std::ostream& out, const TestReport& r) {
  out << "# lack-of-fit test report\n";
  out << "statistic: " << format_double(r.w2) << "\n";
  out << "p_value: " << format_double(r.p_value) << "\n";
  out << "q_hat: " << r.q_hat << "\n";
  out << "q_used: " << r.q_used << "\n";
  out << "family: " << r.family << "\n";
  out << "beta: " << format_vec(r.beta) << "\n";
  if (r.theta.size() > 0) out << "theta: " << format_vec(r.theta) << "\n";
  out << "kappa: " << format_double(r.kappa) << "\n";
  out << "alpha_star: " << format_vec(r.alpha_star) << "\n";
  out << "x0: " << format_double(r.x0) << "\n";
  out << "x0_quantile: " << format_double(r.x0_quantile) << "\n";
  out << "f_x0: " << format_double(r.f_x0) << "\n";
  out << "psi_x0: " << format_double(r.psi_x0) << "\n";
  out << "sigma2_hat: " << format_double(r.sigma2_hat) << "\n";
  out << "variance_mode: " << variance_mode_name(r.variance_mode) << "\n";
  out << "kernel: " << r.kernel << "\n";
  out << "grid_resolution: " << r.grid_resolution << "\n";
  out << "n_directions: " << r.n_directions << "\n";
  out << "n_eval: " << r.n_eval << "\n";
  out << "spherical: " << (r.spherical ? "true" : "false") << "\n";
  out << "single_projection: " << (r.single_projection ? "true" : "false")
      << "\n";
  out << "standardized: " << (r.standardized ? "true" : "false") << "\n";
  out << "min_rcond: " << format_double(r.diag.min_rcond) << "\n";
  out << "max_ridge: " << format_double(r.diag.max_ridge) << "\n";
  out << "ridge_events: " << r.diag.ridge_events << "\n";
  out << "seed: " << format_u64(r.rng.seed) << "\n";
  out << "stream: " << format_u64(r.rng.stream) << "\n";
}

void write_report_json(std::ostream& out, const TestReport& r) {
  nlohmann::ordered_json j;
  j["statistic"] = r.w2;
  j["p_value"] = r.p_value;
  j["q_hat"] = r.q_hat;
  j["q_used"] = r.q_used;
  j["family"] = r.family;
  j["beta"] = std::vector<double>(r.beta.data(), r.beta.data() + r.beta.size());
  j["theta"] =
      std::vector<double>(r.theta.data(), r.theta.data() + r.theta.size());
  j["kappa"] = r.kappa;
  j["alpha_star"] = std::vector<double>(
      r.alpha_star.data(), r.alpha_star.data() + r.alpha_star.size());
  j["x0"] = r.x0;
  j["x0_quantile"] = r.x0_quantile;
  j["f_x0"] = r.f_x0;
  j["psi_x0"] = r.psi_x0;
  j["sigma2_hat"] = r.sigma2_hat;
  j["variance_mode"] = variance_mode_name(r.variance_mode);
  j["kernel"] = r.kernel;
  j["grid_resolution"] = r.grid_resolution;
  j["n_directions"] = r.n_directions;
  j["n_eval"] = r.n_eval;
  j["spherical"] = r.spherical;
  j["single_projection"] = r.single_projection;
  j["standardized"] = r.standardized;
  j["diagnostics"] = {{"min_rcond", r.diag.min_rcond},
                      {"max_ridge", r.diag.max_ridge},
                      {"ridge_events", r.diag.ridge_events},
                      {"solves", r.diag.solves}};
  j["seed"] = r.rng.seed;
  j["stream"] = r.rng.stream;
  out << j.dump(2) << "\n";
}

void write_zheng_text(std::ostream& out, const ZhengReport& r,
                      const Dataset& d, std::uint64_t seed) {
  out << "# kernel lack-of-fit test report\n";
  out << "statistic: " << format_double(r.stat) << "\n";
  out << "p_value: " << format_double(r.p_value) << "\n";
  out << "u_stat: " << format_double(r.u_stat) << "\n";
  out << "beta: " << format_vec(r.beta) << "\n";
  if (r.theta.size() > 0) out << "theta: " << format_vec(r.theta) << "\n";
  out << "bandwidth: " << format_vec(r.bandwidth) << "\n";
  out << "n: " << d.n() << "\n";
  out << "p: " << d.p() << "\n";
  out << "seed: " << format_u64(seed) << "\n";
}

void write_study_rows(std::ostream& out, const std::vector<StudyRow>& rows) {
  out << "# columns: scenario\ta\tn\tp\ttest\treps\tlevel\treject_rate\t"
         "mean_stat\tfailures\tvalid\tseed\n";
  for (const auto& r : rows) {
    out << r.scenario << "\t" << format_double(r.a) << "\t" << r.n << "\t"
        << r.p << "\t" << r.test << "\t" << r.reps << "\t"
        << format_double(r.level) << "\t" << format_double(r.reject_rate)
        << "\t" << format_double(r.mean_stat) << "\t" << r.failures << "\t"
        << (r.valid ? "true" : "false") << "\t" << format_u64(r.seed) << "\n";
  }
}

}  // namespace sitest
