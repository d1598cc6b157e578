#include <doctest.h>

#include <cmath>

#include "sitest/scenarios.hpp"

using namespace sitest;

TEST_SUITE("scenarios") {

TEST_CASE("names, defaults and validation") {
  CHECK(example_from_string("H31") == Example::H31);
  CHECK(example_name(Example::EX1_p4) == std::string("EX1_p4"));
  CHECK_THROWS_AS(example_from_string("H99"), Error);

  CHECK(default_p(Example::EX1_p3) == 3);
  CHECK(default_p(Example::EX1_p4) == 4);
  CHECK(default_p(Example::H11) == 8);
  CHECK(default_p(Example::H31) == 8);
  CHECK(default_p(Example::H41) == 4);
  CHECK(default_p(Example::H43) == 8);
  CHECK(default_p(Example::LOCAL) == 8);

  ScenarioSpec bad;
  bad.example = Example::EX1_p3;
  bad.p = 5;
  CHECK_THROWS_AS(validate(bad), Error);
  bad.example = Example::H31;
  bad.p = 3;  // paired directions need even p
  CHECK_THROWS_AS(validate(bad), Error);
  bad.example = Example::H43;
  bad.p = 4;
  CHECK_THROWS_AS(validate(bad), Error);
  bad.example = Example::H12;
  bad.p = 0;
  bad.a = -0.5;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("covariates follow the requested law") {
  ScenarioSpec spec;
  spec.example = Example::H11;
  spec.n = 20000;
  const Dataset iso = generate(spec, RngSpec{71, 0});
  CHECK(iso.n() == 20000);
  CHECK(iso.p() == 8);
  CHECK(iso.names[0] == "x1");
  CHECK(iso.names[7] == "x8");
  CHECK(iso.response_name == "y");
  const Mat cov_iso =
      iso.xs.transpose() * iso.xs / double(iso.n() - 1);
  for (Eigen::Index i = 0; i < 8; ++i)
    for (Eigen::Index j = 0; j < 8; ++j)
      CHECK(cov_iso(i, j) ==
            doctest::Approx(i == j ? 1.0 : 0.0).epsilon(0.05).scale(1.0));

  spec.x_law = XLaw::Autoregressive;
  const Dataset ar = generate(spec, RngSpec{71, 1});
  const Mat cov_ar = ar.xs.transpose() * ar.xs / double(ar.n() - 1);
  for (Eigen::Index i = 0; i < 8; ++i)
    for (Eigen::Index j = 0; j < 8; ++j)
      CHECK(cov_ar(i, j) == doctest::Approx(std::pow(0.5, std::abs(i - j)))
                                .epsilon(0.05)
                                .scale(1.0));
}

TEST_CASE("a = 0 collapses the H1x family to one null law") {
  ScenarioSpec spec;
  spec.n = 200;
  spec.a = 0.0;
  spec.example = Example::H11;
  const Dataset d11 = generate(spec, RngSpec{72, 0});
  spec.example = Example::H12;
  const Dataset d12 = generate(spec, RngSpec{72, 0});
  spec.example = Example::H13;
  const Dataset d13 = generate(spec, RngSpec{72, 0});
  CHECK((d11.xs - d12.xs).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d11.ys - d12.ys).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d11.ys - d13.ys).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the local sequence is the quadratic departure at 1/sqrt(n)") {
  ScenarioSpec local;
  local.example = Example::LOCAL;
  local.n = 400;
  ScenarioSpec h31;
  h31.example = Example::H31;
  h31.n = 400;
  h31.a = 1.0 / 20.0;
  const Dataset dl = generate(local, RngSpec{73, 0});
  const Dataset dh = generate(h31, RngSpec{73, 0});
  CHECK((dl.ys - dh.ys).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("true directions are unit paired halves") {
  ScenarioSpec spec;
  spec.example = Example::H31;
  const Mat b = true_directions(spec);
  REQUIRE(b.cols() == 2);
  REQUIRE(b.rows() == 8);
  for (int i = 0; i < 4; ++i) {
    CHECK(b(i, 0) == doctest::Approx(0.5));
    CHECK(b(i + 4, 0) == 0.0);
    CHECK(b(i, 1) == 0.0);
    CHECK(b(i + 4, 1) == doctest::Approx(0.5));
  }
  CHECK(std::abs(b.col(0).dot(b.col(1))) < 1e-15);
}

TEST_CASE("hypothesized families per example") {
  ScenarioSpec spec;
  spec.example = Example::H12;
  CHECK(null_model(spec).family == Family::Linear);
  CHECK(null_model(spec).d == 0);
  spec.example = Example::LOCAL;
  CHECK(null_model(spec).family == Family::Linear);
  spec.example = Example::EX1_p3;
  CHECK(null_model(spec).family == Family::ExpIndex);
  spec.example = Example::H41;
  CHECK(null_model(spec).family == Family::ScaledExponential);
  CHECK(null_model(spec).d == 2);
  CHECK(null_model(spec).p == 4);
}

TEST_CASE("generation is deterministic per spec and stream") {
  ScenarioSpec spec;
  spec.example = Example::H32;
  spec.n = 50;
  spec.a = 0.7;
  const Dataset a = generate(spec, RngSpec{74, 5});
  const Dataset b = generate(spec, RngSpec{74, 5});
  const Dataset c = generate(spec, RngSpec{74, 6});
  CHECK((a.xs - b.xs).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.ys - b.ys).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.ys - c.ys).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("study rows are identical for any worker count") {
  ScenarioSpec spec;
  spec.example = Example::H12;
  spec.n = 60;
  spec.a = 0.8;
  std::vector<TestConfig> tests(2);
  tests[0].kind = TestConfig::Kind::Wn;
  tests[0].label = "wn";
  tests[1].kind = TestConfig::Kind::Zheng;
  tests[1].label = "zheng";
  const auto rows1 = run_study(spec, tests, 12, 0.05, RngSpec{75, 0}, 1);
  const auto rows4 = run_study(spec, tests, 12, 0.05, RngSpec{75, 0}, 4);
  REQUIRE(rows1.size() == 2);
  REQUIRE(rows4.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(rows1[i].reject_rate == rows4[i].reject_rate);
    CHECK(rows1[i].mean_stat == rows4[i].mean_stat);
    CHECK(rows1[i].failures == rows4[i].failures);
    CHECK(rows1[i].test == tests[i].label);
    CHECK(rows1[i].scenario == "H12");
    CHECK(rows1[i].n == 60);
    CHECK(rows1[i].p == 8);
    CHECK(rows1[i].reps == 12);
    CHECK(rows1[i].level == 0.05);
    CHECK(rows1[i].seed == 75);
    CHECK(rows1[i].valid);
    CHECK(rows1[i].reject_rate >= 0.0);
    CHECK(rows1[i].reject_rate <= 1.0);
  }
}

}  // TEST_SUITE
