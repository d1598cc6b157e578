#include "sitest/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sitest/dataset.hpp"
#include "sitest/nulldist.hpp"
#include "sitest/report_io.hpp"
#include "sitest/scenarios.hpp"
#include "sitest/transform.hpp"
#include "sitest/zheng.hpp"

namespace sitest {
namespace {

VarianceMode variance_mode_from_string(const std::string& s) {
  if (s == "homoscedastic") return VarianceMode::Homoscedastic;
  if (s == "smoothed") return VarianceMode::Smoothed;
  fail(ErrorCode::InvalidArgument, "unknown variance mode '" + s + "'");
}

XLaw x_law_from_string(const std::string& s) {
  if (s == "isotropic" || s == "iso") return XLaw::Isotropic;
  if (s == "ar" || s == "autoregressive") return XLaw::Autoregressive;
  fail(ErrorCode::InvalidArgument, "unknown x law '" + s + "'");
}

TestConfig::Kind test_kind_from_string(const std::string& s) {
  if (s == "wn") return TestConfig::Kind::Wn;
  if (s == "wn-single") return TestConfig::Kind::WnSingle;
  if (s == "zheng") return TestConfig::Kind::Zheng;
  fail(ErrorCode::InvalidArgument, "unknown test '" + s + "'");
}

// Output redirection: write to `path` when nonempty, else to `fallback`.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      out_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) fail(ErrorCode::IoError, "cannot open '" + path + "'");
    out_ = file_.get();
  }
  std::ostream& stream() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_ = nullptr;
};

struct WnFlagSet {
  std::string kernel = "quartic";
  double bandwidth = 0.0;
  std::string variance_mode = "homoscedastic";
  double x0_quantile = 0.99;
  int grid = 64;
  bool spherical = false;
  bool single_projection = false;
  double mrer_c = -1.0;  // < 0 means default
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--kernel", kernel,
                    "Smoothing kernel: quartic | gaussian | epanechnikov");
    cmd->add_option("--bandwidth", bandwidth,
                    "Kernel bandwidth; <= 0 selects the plug-in rule");
    cmd->add_option("--variance-mode", variance_mode,
                    "homoscedastic | smoothed");
    cmd->add_option("--x0-quantile", x0_quantile,
                    "Upper truncation quantile of the fitted index");
    cmd->add_option("--grid", grid, "Direction grid resolution");
    cmd->add_flag("--spherical", spherical,
                  "Scalar tail reduction (families without theta)");
    cmd->add_flag("--single-projection", single_projection,
                  "Scan only the fitted index direction");
    cmd->add_option("--mrer-c", mrer_c,
                    "Dimension penalty constant; < 0 selects log(n)/n");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--stream", stream, "RNG stream index");
  }

  WnOptions to_options() const {
    WnOptions o;
    o.kernel.family = kernel_from_string(kernel);
    o.kernel.bandwidth = bandwidth;
    o.variance_mode = variance_mode_from_string(variance_mode);
    o.x0_quantile = x0_quantile;
    o.grid_resolution = grid;
    o.spherical = spherical;
    o.single_projection = single_projection;
    if (mrer_c >= 0.0) o.mrer_c = mrer_c;
    o.rng = RngSpec{seed, stream};
    return o;
  }
};

int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Adaptive lack-of-fit test for single-index regression"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // ---- test ----
  auto* cmd_test = app.add_subcommand(
      "test", "Run the lack-of-fit test on a delimited dataset");
  std::string data_path, response, family_name = "linear", format = "text";
  std::string out_path;
  bool standardize = false, run_zheng = false;
  WnFlagSet wn_flags;
  cmd_test->add_option("--data", data_path, "CSV/TSV file with header")
      ->required();
  cmd_test->add_option("--response", response,
                       "Response column name or 0-based index (default last)");
  cmd_test->add_option("--family", family_name,
                       "linear | scaled-exponential | exp-index | cubic-index");
  cmd_test->add_flag("--standardize", standardize,
                     "Standardize columns before testing");
  cmd_test->add_option("--format", format, "Report format: text | json");
  cmd_test->add_option("--out", out_path, "Write the report here");
  cmd_test->add_flag("--zheng", run_zheng,
                     "Run the kernel comparator instead of the projection test");
  wn_flags.attach(cmd_test);

  // ---- simulate ----
  auto* cmd_sim = app.add_subcommand(
      "simulate", "Monte Carlo study on a benchmark scenario");
  std::string scenario_name;
  int sim_n = 100, sim_p = 0, reps = 500, workers = 1;
  std::vector<double> amplitudes;
  std::string x_law = "isotropic", sim_out;
  std::vector<std::string> test_names;
  double level = 0.05;
  WnFlagSet sim_flags;
  cmd_sim->add_option("--scenario", scenario_name, "Scenario name")
      ->required();
  cmd_sim->add_option("--n", sim_n, "Sample size");
  cmd_sim->add_option("--p", sim_p, "Dimension (0 = scenario default)");
  cmd_sim->add_option("--a", amplitudes,
                      "Departure amplitudes, one study per value");
  cmd_sim->add_option("--x-law", x_law, "isotropic | ar");
  cmd_sim->add_option("--tests", test_names,
                      "Tests to run: wn | wn-single | zheng");
  cmd_sim->add_option("--reps", reps, "Replications per study");
  cmd_sim->add_option("--level", level, "Nominal level");
  cmd_sim->add_option("--workers", workers, "Worker threads");
  cmd_sim->add_option("--out", sim_out, "Write table rows here");
  sim_flags.attach(cmd_sim);

  // ---- null-table ----
  auto* cmd_null = app.add_subcommand(
      "null-table", "Monte Carlo quantiles of the limiting null law");
  int table_m = 200000, table_k = 2048, table_terms = 200;
  std::string method = "series", null_out;
  std::vector<double> probs;
  std::uint64_t null_seed = 1, null_stream = 0;
  cmd_null->add_option("--m", table_m, "Monte Carlo sample count");
  cmd_null->add_option("--method", method, "paths | series");
  cmd_null->add_option("--k", table_k, "Path steps (paths method)");
  cmd_null->add_option("--terms", table_terms, "Series terms (series method)");
  cmd_null->add_option("--probs", probs, "Quantile probabilities");
  cmd_null->add_option("--seed", null_seed, "RNG seed");
  cmd_null->add_option("--stream", null_stream, "RNG stream index");
  cmd_null->add_option("--out", null_out, "Write quantiles here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (cmd_test->parsed()) {
    const Dataset d = load_dataset_file(data_path, response, standardize);
    const Family family = SingleIndexModel::family_from_string(family_name);
    const SingleIndexModel m =
        SingleIndexModel::make(family, static_cast<int>(d.p()));
    OutputTarget target(out_path, out);
    if (run_zheng) {
      const ZhengReport rep = zheng_test(d, m);
      write_zheng_text(target.stream(), rep, d, wn_flags.seed);
      return 0;
    }
    const TestReport rep = wn_statistic(d, m, wn_flags.to_options());
    if (format == "json") {
      write_report_json(target.stream(), rep);
    } else if (format == "text") {
      write_report_text(target.stream(), rep);
    } else {
      fail(ErrorCode::InvalidArgument, "unknown format '" + format + "'");
    }
    return 0;
  }

  if (cmd_sim->parsed()) {
    ScenarioSpec spec;
    spec.example = example_from_string(scenario_name);
    spec.n = sim_n;
    spec.p = sim_p;
    spec.x_law = x_law_from_string(x_law);
    if (amplitudes.empty()) amplitudes.push_back(0.0);
    if (test_names.empty()) test_names.push_back("wn");
    std::vector<TestConfig> tests;
    for (const auto& name : test_names) {
      TestConfig cfg;
      cfg.kind = test_kind_from_string(name);
      cfg.label = name;
      cfg.wn = sim_flags.to_options();
      tests.push_back(std::move(cfg));
    }
    std::vector<StudyRow> rows;
    for (double a : amplitudes) {
      spec.a = a;
      const RngSpec study_rng{sim_flags.seed, sim_flags.stream};
      auto part = run_study(spec, tests, reps, level, study_rng, workers);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    OutputTarget target(sim_out, out);
    write_study_rows(target.stream(), rows);
    return 0;
  }

  // null-table
  if (table_m < 1000)
    err << "warning: m = " << table_m
        << " is small; quantiles will be noisy\n";
  if (probs.empty()) probs = {0.5, 0.9, 0.95, 0.99};
  for (double p : probs)
    if (!(p > 0.0 && p <= 1.0))
      fail(ErrorCode::InvalidArgument, "quantile probabilities lie in (0, 1]");
  NullTable table;
  const RngSpec table_rng{null_seed, null_stream};
  if (method == "paths") {
    table = simulate_null_paths(table_m, table_k, table_rng);
  } else if (method == "series") {
    table = simulate_null_series(table_m, table_terms, table_rng);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown method '" + method + "'");
  }
  OutputTarget target(null_out, out);
  target.stream() << "# method: " << table.method
                  << " m: " << table.m() << " resolution: " << table.resolution
                  << " seed: " << table.seed << " stream: " << table.stream
                  << "\n";
  for (double p : probs)
    target.stream() << format_double(p) << "\t"
                    << format_double(table.quantile(p)) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  try {
    return dispatch(argc, argv, out, err);
  } catch (const Error& e) {
    err << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
    return input_side(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace sitest
