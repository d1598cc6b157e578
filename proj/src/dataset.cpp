#include "sitest/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace sitest {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delim) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

double parse_cell(const std::string& raw, std::size_t file_row,
                  const std::string& col_name) {
  const std::string cell = trim(raw);
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || cell.empty())
    fail(ErrorCode::ParseError, "row " + std::to_string(file_row) +
                                    ", column '" + col_name +
                                    "': cannot parse '" + cell + "'");
  if (!std::isfinite(v))
    fail(ErrorCode::ParseError, "row " + std::to_string(file_row) +
                                    ", column '" + col_name +
                                    "': non-finite value");
  return v;
}

// Mean and n-1 standard deviation of one column.
std::pair<double, double> column_moments(const Vec& col) {
  const double mean = col.mean();
  const double ss = (col.array() - mean).square().sum();
  const double sd =
      col.size() > 1 ? std::sqrt(ss / static_cast<double>(col.size() - 1))
                     : 0.0;
  return {mean, sd};
}

}  // namespace

Dataset load_dataset(std::istream& in, const std::string& response,
                     bool standardize) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first >= lines.size())
    fail(ErrorCode::ParseError, "empty input: no header row");

  const std::string& header = lines[first];
  const auto commas = std::count(header.begin(), header.end(), ',');
  const auto tabs = std::count(header.begin(), header.end(), '\t');
  char delim;
  if (commas > 0)
    delim = ',';
  else if (tabs > 0)
    delim = '\t';
  else
    fail(ErrorCode::ParseError,
         "header row contains neither commas nor tabs; cannot detect "
         "delimiter");

  std::vector<std::string> names;
  for (auto& cell : split(header, delim)) names.push_back(trim(cell));
  const std::size_t ncol = names.size();
  if (ncol < 2)
    fail(ErrorCode::ParseError,
         "need at least one predictor column and a response");

  // Response selection: exact name, else 0-based integer index, default last.
  std::size_t ry = ncol - 1;
  if (!response.empty()) {
    auto it = std::find(names.begin(), names.end(), response);
    if (it != names.end()) {
      ry = static_cast<std::size_t>(it - names.begin());
    } else {
      int idx = -1;
      auto [ptr, ec] = std::from_chars(response.data(),
                                       response.data() + response.size(), idx);
      if (ec != std::errc{} || ptr != response.data() + response.size() ||
          idx < 0 || static_cast<std::size_t>(idx) >= ncol)
        fail(ErrorCode::InvalidArgument,
             "response column '" + response + "' not found");
      ry = static_cast<std::size_t>(idx);
    }
  }

  std::vector<std::vector<double>> rows;
  for (std::size_t li = first + 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const auto cells = split(lines[li], delim);
    if (cells.size() != ncol)
      fail(ErrorCode::ParseError,
           "row " + std::to_string(li + 1) + ": expected " +
               std::to_string(ncol) + " fields, got " +
               std::to_string(cells.size()));
    std::vector<double> vals(ncol);
    for (std::size_t c = 0; c < ncol; ++c)
      vals[c] = parse_cell(cells[c], li + 1, names[c]);
    rows.push_back(std::move(vals));
  }

  const std::size_t n = rows.size();
  const std::size_t p = ncol - 1;
  if (n < p + 5)
    fail(ErrorCode::TooFewRows, "need at least p+5 = " + std::to_string(p + 5) +
                                    " rows, got " + std::to_string(n));

  Dataset d;
  d.xs.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  d.ys.resize(static_cast<Eigen::Index>(n));
  d.response_name = names[ry];
  for (std::size_t c = 0; c < ncol; ++c)
    if (c != ry) d.names.push_back(names[c]);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Index xc = 0;
    for (std::size_t c = 0; c < ncol; ++c) {
      if (c == ry)
        d.ys(static_cast<Eigen::Index>(i)) = rows[i][c];
      else
        d.xs(static_cast<Eigen::Index>(i), xc++) = rows[i][c];
    }
  }
  d.center = Vec::Zero(static_cast<Eigen::Index>(p) + 1);
  d.scale = Vec::Ones(static_cast<Eigen::Index>(p) + 1);
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    auto [mean, sd] = column_moments(d.xs.col(j));
    if (sd <= 1e-12 * (1.0 + std::abs(mean)))
      fail(ErrorCode::DegenerateColumn,
           "column '" + d.names[static_cast<std::size_t>(j)] +
               "' has zero variance");
  }
  auto [ymean, ysd] = column_moments(d.ys);
  if (ysd <= 1e-12 * (1.0 + std::abs(ymean)))
    fail(ErrorCode::DegenerateResponse,
         "response '" + d.response_name + "' has zero variance");
  if (standardize) return standardize_columns(d);
  return d;
}

Dataset load_dataset_file(const std::string& path, const std::string& response,
                          bool standardize) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  return load_dataset(in, response, standardize);
}

Dataset standardize_columns(const Dataset& d) {
  Dataset out = d;
  const Eigen::Index p = d.p();
  for (Eigen::Index j = 0; j < p; ++j) {
    auto [mean, sd] = column_moments(d.xs.col(j));
    if (sd <= 1e-12 * (1.0 + std::abs(mean)))
      fail(ErrorCode::DegenerateColumn,
           "column '" + d.names[static_cast<std::size_t>(j)] +
               "' has zero variance");
    out.xs.col(j) = (d.xs.col(j).array() - mean) / sd;
    // Compose with any earlier standardization so the recorded transform
    // always maps back to the original data.
    out.center(j) = d.center(j) + mean * d.scale(j);
    out.scale(j) = d.scale(j) * sd;
  }
  auto [ymean, ysd] = column_moments(d.ys);
  if (ysd <= 1e-12 * (1.0 + std::abs(ymean)))
    fail(ErrorCode::DegenerateResponse,
         "response '" + d.response_name + "' has zero variance");
  out.ys = (d.ys.array() - ymean) / ysd;
  out.center(p) = d.center(p) + ymean * d.scale(p);
  out.scale(p) = d.scale(p) * ysd;
  out.standardized = true;
  return out;
}

Dataset unstandardize_columns(const Dataset& d) {
  Dataset out = d;
  const Eigen::Index p = d.p();
  for (Eigen::Index j = 0; j < p; ++j)
    out.xs.col(j) = d.xs.col(j).array() * d.scale(j) + d.center(j);
  out.ys = d.ys.array() * d.scale(p) + d.center(p);
  out.center = Vec::Zero(p + 1);
  out.scale = Vec::Ones(p + 1);
  out.standardized = false;
  return out;
}

}  // namespace sitest
