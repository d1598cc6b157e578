#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sitest/common.hpp"

namespace sitest {

// Design matrix plus response. center/scale have p+1 entries (predictors
// first, response last); for unstandardized data they are 0/1.
struct Dataset {
  Mat xs;                          // n x p
  Vec ys;                          // n
  std::vector<std::string> names;  // p predictor names
  std::string response_name;
  bool standardized = false;
  Vec center;  // p+1
  Vec scale;   // p+1

  Eigen::Index n() const { return xs.rows(); }
  Eigen::Index p() const { return xs.cols(); }
};

// Parses a delimited table with a header row. The delimiter is detected from
// the header (comma, falling back to tab). `response` selects the response
// column by name, or by 0-based index if it parses as an integer; empty means
// the last column. Errors: ParseError (naming row/column), TooFewRows
// (n < p + 5), DegenerateColumn, DegenerateResponse.
Dataset load_dataset(std::istream& in, const std::string& response = "",
                     bool standardize = false);
Dataset load_dataset_file(const std::string& path,
                          const std::string& response = "",
                          bool standardize = false);

// Centers and scales every column (and the response) by mean and sample
// standard deviation (n-1 denominator). Idempotent up to floating point;
// a zero-variance column is a DegenerateColumn error.
Dataset standardize_columns(const Dataset& d);

// Inverse of standardize_columns; used by the round-trip test.
Dataset unstandardize_columns(const Dataset& d);

}  // namespace sitest
