#include <doctest.h>

#include <sstream>
#include <string>

#include "sitest/dataset.hpp"

using namespace sitest;

namespace {

// 8 rows, 2 predictors: enough to clear the n >= p + 5 floor.
const char* kCsv =
    "u,v,y\n"
    "1,0.5,2\n"
    "2,1.5,3\n"
    "3,0.25,5\n"
    "4,2.5,7\n"
    "5,1.25,11\n"
    "6,0.75,13\n"
    "7,3.5,17\n"
    "8,1.0,19\n";

Dataset parse(const std::string& text, const std::string& response = "",
              bool standardize = false) {
  std::istringstream in(text);
  return load_dataset(in, response, standardize);
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("comma table parses with names and shape") {
  const Dataset d = parse(kCsv);
  CHECK(d.n() == 8);
  CHECK(d.p() == 2);
  CHECK(d.names[0] == "u");
  CHECK(d.names[1] == "v");
  CHECK(d.response_name == "y");
  CHECK(d.xs(2, 0) == 3.0);
  CHECK(d.xs(2, 1) == 0.25);
  CHECK(d.ys(7) == 19.0);
  CHECK_FALSE(d.standardized);
  CHECK(d.center.size() == 3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(d.center(i) == 0.0);
    CHECK(d.scale(i) == 1.0);
  }
}

TEST_CASE("tab delimiter is the fallback") {
  std::string tsv(kCsv);
  for (auto& c : tsv)
    if (c == ',') c = '\t';
  const Dataset d = parse(tsv);
  CHECK(d.p() == 2);
  CHECK(d.ys(0) == 2.0);
}

TEST_CASE("response selection by name and by index") {
  const Dataset by_name = parse(kCsv, "u");
  CHECK(by_name.response_name == "u");
  CHECK(by_name.ys(3) == 4.0);
  CHECK(by_name.names[0] == "v");
  CHECK(by_name.names[1] == "y");

  const Dataset by_index = parse(kCsv, "1");
  CHECK(by_index.response_name == "v");
  CHECK(by_index.ys(0) == 0.5);
}

TEST_CASE("input errors carry the right code") {
  auto code_of = [](const std::string& text, const std::string& resp = "") {
    try {
      parse(text, resp);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;  // sentinel: nothing thrown
  };
  CHECK(code_of("u,v,y\n1,2\n") == ErrorCode::ParseError);
  CHECK(code_of("u,v,y\n1,abc,3\n") == ErrorCode::ParseError);
  CHECK(code_of("u,v,y\n1,2,3\n4,5,6\n") == ErrorCode::TooFewRows);
  CHECK(code_of(kCsv, "nope") == ErrorCode::InvalidArgument);
  std::string flat(kCsv);
  // Zero-variance first predictor.
  flat =
      "u,v,y\n"
      "1,0.5,2\n1,1.5,3\n1,0.25,5\n1,2.5,7\n"
      "1,1.25,11\n1,0.75,13\n1,3.5,17\n1,1.0,19\n";
  CHECK(code_of(flat) == ErrorCode::DegenerateColumn);
  std::string const_y(kCsv);
  const_y =
      "u,v,y\n"
      "1,0.5,2\n2,1.5,2\n3,0.25,2\n4,2.5,2\n"
      "5,1.25,2\n6,0.75,2\n7,3.5,2\n8,1.0,2\n";
  CHECK(code_of(const_y) == ErrorCode::DegenerateResponse);
  CHECK_THROWS_AS(load_dataset_file("/nonexistent/path.csv"), Error);
}

TEST_CASE("standardization round-trips") {
  const Dataset d = parse(kCsv, "", true);
  CHECK(d.standardized);
  for (Eigen::Index c = 0; c < d.p(); ++c) {
    CHECK(d.xs.col(c).mean() == doctest::Approx(0.0).epsilon(1e-12));
    const double sd = std::sqrt(d.xs.col(c).squaredNorm() /
                                static_cast<double>(d.n() - 1));
    CHECK(sd == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(d.ys.mean() == doctest::Approx(0.0).epsilon(1e-12));

  const Dataset raw = parse(kCsv);
  const Dataset back = unstandardize_columns(d);
  CHECK((back.xs - raw.xs).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((back.ys - raw.ys).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_FALSE(back.standardized);
}

}  // TEST_SUITE
